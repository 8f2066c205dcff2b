#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tspdual/instance.hpp"
#include "tspdual/reduction.hpp"

namespace tspdual {

// Strict positive definiteness is declared when the smallest eigenvalue of
// A_r + diag(mu) exceeds this.
inline constexpr double kPdTolerance = 1e-10;
inline constexpr double kBinaryTolerance = 1e-6;

// Multipliers for E_r Y = e (lambda, 2n-3 entries) and Y∘Y = Y
// (mu, (n-1)^2 entries).
struct DualPoint {
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
};

// A_r(lambda, mu) = A_r + diag(mu),  b_r(lambda, mu) = b_r + mu/2 - E_r'lambda.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble(const ReducedProblem& r,
                                                     const DualPoint& p);

struct ConeTest {
  bool in_S_plus = false;
  double min_eig = 0.0;
};

ConeTest dual_feasible(const ReducedProblem& r, const DualPoint& p);

struct DualEvaluation {
  double value = 0.0;
  Eigen::VectorXd Y;
  Eigen::VectorXd grad_lambda;
  Eigen::VectorXd grad_mu;
  double min_eig = 0.0;
  bool in_S_plus = false;

  double gradient_norm() const {
    return std::sqrt(grad_lambda.squaredNorm() + grad_mu.squaredNorm());
  }
};

// Dual function value, minimizer of the Lagrangian and envelope gradient.
// Throws NotDualFeasible outside the cone.
DualEvaluation dual_value(const ReducedProblem& r, const DualPoint& p);

// Lagrangian L(Y, lambda, mu) at an arbitrary Y.
double lagrangian(const ReducedProblem& r, const DualPoint& p,
                  const Eigen::VectorXd& y);

// lambda = 0, mu_i = 1 + sum_k |A_r[i,k]|: strictly diagonally dominant.
DualPoint default_dual_start(const ReducedProblem& r);

enum class Termination { GradientSmall, Stalled, IterationCap, LeftCone };
const char* to_string(Termination t);

struct AscentConfig {
  int max_iter = 10000;
  double gtol = 1e-8;
  double ftol = 1e-12;
  int stall_window = 10;
  double initial_step = 1.0;
  double min_step = 1e-20;
  double armijo = 1e-4;
};

struct AscentStep {
  double value = 0.0;
  double gradient_norm = 0.0;
  double min_eig = 0.0;
};

struct AscentResult {
  DualPoint best_point;
  double best_value = 0.0;
  int iterations = 0;
  std::vector<AscentStep> trajectory;  // entry 0 is the start
  Termination termination = Termination::IterationCap;
};

// Gradient ascent with Armijo backtracking. A trial step that leaves the
// cone is rejected and the step halved; accepted steps never decrease g.
AscentResult dual_ascent(const ReducedProblem& r, const DualPoint& start,
                         const AscentConfig& cfg = {});

enum class Verdict {
  NotDualFeasible,
  NotCritical,
  NonBinaryRecovery,
  InfeasibleRecovery,
  SuboptimalRecovery,
  ConfirmsTheorem2,
};
const char* to_string(Verdict v);

struct VerifyConfig {
  double gtol = 1e-8;
  double bin_tol = kBinaryTolerance;
  double feas_tol = 1e-8;
  double opt_tol = 1e-8;
};

// Outcome of checking whether a dual point certifies global optimality of
// its recovered Y. Checks run in order; the verdict names the first
// failure. Diagnostics past a failed cone test are left at zero.
struct VerifyReport {
  Verdict verdict = Verdict::NotDualFeasible;
  bool in_S_plus = false;
  bool critical = false;
  bool binary = false;
  bool feasible = false;
  bool optimal = false;
  double min_eig = 0.0;
  double gradient_norm = 0.0;
  double binary_deviation = 0.0;
  double feasibility_residual = 0.0;
  double recovered_objective = 0.0;
  double oracle_optimum = 0.0;
};

VerifyReport verify_global(const ReducedProblem& r, const DualPoint& p,
                           const OracleResult& oracle,
                           const VerifyConfig& cfg = {});

}  // namespace tspdual
