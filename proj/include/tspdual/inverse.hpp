#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tspdual/dual.hpp"
#include "tspdual/instance.hpp"
#include "tspdual/reduction.hpp"

namespace tspdual {

// Inverse feasibility problem: given a target tour Ybar, look for distances
// d and multipliers (lambda, mu) such that
//   (A_r + diag mu) Ybar = b_r + mu/2 - E_r' lambda,   A_r + diag mu > 0,
//   Ybar's tour is strictly shortest,  d is a metric with positive entries.
// mu is eliminated in closed form, so the search runs over (d, lambda) only.

enum class Parameterization { Points, Direct };
const char* to_string(Parameterization p);

enum class InverseVerdict { NoFeasiblePointFound, FeasibleCounterexample };
const char* to_string(InverseVerdict v);

struct InverseConfig {
  int n = 4;
  int restarts = 1000;
  // Coordinate polls per restart (each poll costs at most two scores).
  int local_iters = 2000;
  double lambda_box_factor = 10.0;
  std::uint64_t seed = 0;
  Parameterization parameterization = Parameterization::Points;
  double penalty = 10.0;
  // Slack demanded of strict inequalities (PD, tour margins) in a verdict.
  double strict_margin = 1e-6;
  double step_floor = 1e-9;
  double initial_step = 0.1;
};

// Closed-form mu from mu_i (Ybar_i - 1/2) = b_i - [A_r Ybar]_i - [E_r' lambda]_i.
// Throws InfeasibleTarget unless Ybar is binary with E_r Ybar = e.
Eigen::VectorXd eliminate_mu(const ReducedProblem& r,
                             const Eigen::VectorXd& ybar,
                             const Eigen::VectorXd& lambda);

// ||(A_r + diag mu) Y - (b_r + mu/2 - E_r' lambda)||_inf.
double stationarity_residual(const ReducedProblem& r, const DualPoint& p,
                             const Eigen::VectorXd& y);

// Length of every other canonical tour minus the length of Ybar's tour,
// in lexicographic order of the alternatives.
std::vector<double> optimality_margins(const DistanceMatrix& d,
                                       const Eigen::VectorXd& ybar);

// Total positive-part violation of nonnegativity, symmetry and the triangle
// inequality (with kTriangleSlack).
double edm_violation(const Eigen::MatrixXd& d);

struct FeasibilityScore {
  double min_eig = 0.0;
  Eigen::VectorXd mu;
  double stationarity_residual = 0.0;
  std::vector<double> margins;
  double edm_violation = 0.0;
  double score = 0.0;
};

// Rebuilds the reduced problem from d, eliminates mu and scores the
// candidate: min_eig - penalty * (margin shortfalls + EDM violation).
FeasibilityScore feasibility_score(const DistanceMatrix& d,
                                   const Eigen::VectorXd& ybar,
                                   const Eigen::VectorXd& lambda,
                                   const InverseConfig& cfg);

struct InverseCandidate {
  DistanceMatrix d;
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  bool derived = true;
  Eigen::MatrixXd points;  // n x 2 for the Points parameterization, else empty
};

struct RestartResult {
  int restart = 0;
  std::optional<InverseCandidate> best;
  FeasibilityScore score;
  int polls = 0;
  long evaluations = 0;
};

// One multistart restart. When trace is non-null it receives the accepted
// score sequence (starting score first).
RestartResult run_restart(const Eigen::VectorXd& ybar, const InverseConfig& cfg,
                          int restart, std::vector<double>* trace = nullptr);

struct ReplayCheck {
  bool metric = false;
  bool positive = false;
  bool stationary = false;
  bool positive_definite = false;
  bool target_optimal = false;
  bool passed() const {
    return metric && positive && stationary && positive_definite &&
           target_optimal;
  }
};

// Independent re-verification of a candidate from its distances and
// multipliers alone.
ReplayCheck replay_candidate(const InverseCandidate& c,
                             const Eigen::VectorXd& ybar,
                             double strict_margin);

struct InverseSearchReport {
  InverseConfig config;
  Eigen::VectorXd ybar;
  std::optional<InverseCandidate> best;
  int best_restart = -1;
  double best_score = 0.0;
  double best_min_eig = 0.0;
  double stationarity_residual = 0.0;
  std::vector<double> optimality_margins;
  double edm_violations = 0.0;
  int restarts = 0;
  long evaluations = 0;
  int restarts_with_positive_min_eig = 0;
  std::optional<ReplayCheck> replay;
  InverseVerdict verdict = InverseVerdict::NoFeasiblePointFound;
};

// Ybar of the identity tour (1, 2, ..., n).
Eigen::VectorXd identity_target(int n);

// Restarts run in parallel (OpenMP); results are merged by best score with
// ties going to the lowest restart index, so output matches the serial run.
InverseSearchReport inverse_search(const Eigen::VectorXd& ybar,
                                   const InverseConfig& cfg);

// Single-threaded reference used by tests and the benchmark.
InverseSearchReport inverse_search_serial(const Eigen::VectorXd& ybar,
                                          const InverseConfig& cfg);

}  // namespace tspdual
