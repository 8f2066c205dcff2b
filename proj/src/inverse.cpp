#include "tspdual/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "tspdual/formulation.hpp"

namespace tspdual {

const char* to_string(Parameterization p) {
  switch (p) {
    case Parameterization::Points: return "points";
    case Parameterization::Direct: return "direct";
  }
  return "unknown";
}

const char* to_string(InverseVerdict v) {
  switch (v) {
    case InverseVerdict::NoFeasiblePointFound: return "NoFeasiblePointFound";
    case InverseVerdict::FeasibleCounterexample: return "FeasibleCounterexample";
  }
  return "Unknown";
}

namespace {

void require_target(const ReducedProblem& r, const Eigen::VectorXd& ybar) {
  if (ybar.size() != r.size()) {
    throw Error(ErrorKind::DimensionMismatch, "target vector length");
  }
  const bool binary =
      ((ybar.array() == 0.0) || (ybar.array() == 1.0)).all();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(r.multipliers());
  if (!binary || r.E_r * ybar != ones) {
    throw Error(ErrorKind::InfeasibleTarget,
                "target must be binary with E_r Y = e");
  }
}

double smallest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double min_off_diagonal(const Eigen::MatrixXd& d) {
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (i != j) lo = std::min(lo, d(i, j));
    }
  }
  return lo;
}

// Search vector layout: geometry (2n point coordinates, or the n(n-1)/2
// upper-triangle distances) followed by lambda.
struct SearchSpace {
  int n;
  Parameterization kind;
  int geometry;
  int multipliers;

  SearchSpace(int n_, Parameterization kind_)
      : n(n_),
        kind(kind_),
        geometry(kind_ == Parameterization::Points ? 2 * n_
                                                   : n_ * (n_ - 1) / 2),
        multipliers(2 * n_ - 3) {}

  int dim() const { return geometry + multipliers; }

  // Unnormalized distances implied by the geometry block.
  Eigen::MatrixXd raw_distances(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    if (kind == Parameterization::Points) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double dx = x(2 * i) - x(2 * j);
          const double dy = x(2 * i + 1) - x(2 * j + 1);
          d(i, j) = d(j, i) = std::sqrt(dx * dx + dy * dy);
        }
      }
    } else {
      int k = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
          d(i, j) = d(j, i) = std::abs(x(k));
        }
      }
    }
    return d;
  }

  Eigen::MatrixXd points(const Eigen::VectorXd& x) const {
    if (kind != Parameterization::Points) return {};
    Eigen::MatrixXd p(n, 2);
    for (int i = 0; i < n; ++i) {
      p(i, 0) = x(2 * i);
      p(i, 1) = x(2 * i + 1);
    }
    return p;
  }
};

struct Evaluated {
  std::optional<DistanceMatrix> d;
  FeasibilityScore score;
};

constexpr double kDegenerateScore = -std::numeric_limits<double>::max();

// Distances are normalized to max d = 1: every defining relation is
// positively homogeneous in (d, lambda, mu), so only the direction matters.
Evaluated evaluate(const SearchSpace& space, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& ybar, const InverseConfig& cfg) {
  Evaluated out;
  const Eigen::MatrixXd raw = space.raw_distances(x);
  const double scale = raw.maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    out.score.score = kDegenerateScore;
    return out;
  }
  out.d = DistanceMatrix::validate(raw / scale, false);
  out.score = feasibility_score(*out.d, ybar, x.tail(space.multipliers), cfg);
  return out;
}

std::mt19937_64 restart_engine(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

}  // namespace

Eigen::VectorXd eliminate_mu(const ReducedProblem& r,
                             const Eigen::VectorXd& ybar,
                             const Eigen::VectorXd& lambda) {
  require_target(r, ybar);
  if (lambda.size() != r.multipliers()) {
    throw Error(ErrorKind::DimensionMismatch, "lambda length");
  }
  const Eigen::VectorXd rhs =
      r.b_r - r.A_r * ybar - r.E_r.transpose() * lambda;
  Eigen::VectorXd mu(r.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    mu(i) = ybar(i) == 1.0 ? 2.0 * rhs(i) : -2.0 * rhs(i);
  }
  return mu;
}

double stationarity_residual(const ReducedProblem& r, const DualPoint& p,
                             const Eigen::VectorXd& y) {
  const auto [a, b] = assemble(r, p);
  return (a * y - b).lpNorm<Eigen::Infinity>();
}

std::vector<double> optimality_margins(const DistanceMatrix& d,
                                       const Eigen::VectorXd& ybar) {
  const IndexMap map(d.n());
  Tour target;
  try {
    target = tour_from_reduced(map, ybar).canonical();
  } catch (const Error& e) {
    throw Error(ErrorKind::InfeasibleTarget, e.what());
  }
  const OracleResult oracle = brute_force_optimum(d, true);
  const double base = oracle.all_lengths.at(target);
  std::vector<double> margins;
  margins.reserve(oracle.all_lengths.size() - 1);
  for (const auto& [tour, len] : oracle.all_lengths) {
    if (tour != target) margins.push_back(len - base);
  }
  return margins;
}

double edm_violation(const Eigen::MatrixXd& d) {
  const auto n = d.rows();
  double v = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        v += std::abs(d(i, i));
        continue;
      }
      v += std::max(0.0, -d(i, j));
      if (i < j) v += std::abs(d(i, j) - d(j, i));
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double via = d(i, k) + d(k, j);
        v += std::max(0.0, d(i, j) - via - kTriangleSlack * std::max(1.0, via));
      }
    }
  }
  return v;
}

FeasibilityScore feasibility_score(const DistanceMatrix& d,
                                   const Eigen::VectorXd& ybar,
                                   const Eigen::VectorXd& lambda,
                                   const InverseConfig& cfg) {
  const ReducedProblem r = reduce(build_formulation(d));
  FeasibilityScore s;
  s.mu = eliminate_mu(r, ybar, lambda);
  const DualPoint p{lambda, s.mu};
  const auto [a, b] = assemble(r, p);
  s.min_eig = smallest_eigenvalue(a);
  s.stationarity_residual = (a * ybar - b).lpNorm<Eigen::Infinity>();
  s.margins = optimality_margins(d, ybar);
  s.edm_violation = edm_violation(d.entries());

  // A positive definite matrix has a positive diagonal, and diag(A_r) = 0.
  if (s.min_eig > kPdTolerance && (s.mu.array() <= 0.0).any()) {
    throw std::logic_error(
        "positive smallest eigenvalue with a nonpositive diagonal entry");
  }

  double shortfall = 0.0;
  for (double m : s.margins) shortfall += std::max(0.0, cfg.strict_margin - m);
  s.score = s.min_eig - cfg.penalty * (shortfall + s.edm_violation);
  return s;
}

Eigen::VectorXd identity_target(int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  return embed_tour(IndexMap(n), Tour(std::move(order)));
}

RestartResult run_restart(const Eigen::VectorXd& ybar, const InverseConfig& cfg,
                          int restart, std::vector<double>* trace) {
  const SearchSpace space(cfg.n, cfg.parameterization);
  auto engine = restart_engine(cfg.seed, restart);
  const double box = cfg.lambda_box_factor;

  Eigen::VectorXd x(space.dim());
  for (int c = 0; c < space.geometry; ++c) x(c) = uniform01(engine);
  for (int c = space.geometry; c < space.dim(); ++c) {
    x(c) = box * (2.0 * uniform01(engine) - 1.0);
  }

  Eigen::VectorXd initial(space.dim());
  initial.head(space.geometry).setConstant(cfg.initial_step);
  initial.tail(space.multipliers).setConstant(cfg.initial_step * box);
  Eigen::VectorXd step = initial;

  RestartResult res;
  res.restart = restart;
  Evaluated cur = evaluate(space, x, ybar, cfg);
  res.evaluations = 1;
  if (trace) trace->push_back(cur.score.score);

  int coord = -1;
  while (res.polls < cfg.local_iters && step.maxCoeff() >= cfg.step_floor) {
    coord = (coord + 1) % space.dim();
    if (step(coord) < cfg.step_floor) continue;
    ++res.polls;
    bool improved = false;
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd trial = x;
      trial(coord) += sign * step(coord);
      Evaluated ev = evaluate(space, trial, ybar, cfg);
      ++res.evaluations;
      if (ev.score.score > cur.score.score) {
        x = std::move(trial);
        cur = std::move(ev);
        improved = true;
        break;
      }
    }
    if (improved) {
      step(coord) = std::min(2.0 * step(coord), initial(coord));
      if (trace) trace->push_back(cur.score.score);
    } else {
      step(coord) *= 0.5;
    }
  }

  res.score = cur.score;
  if (cur.d) {
    res.best = InverseCandidate{*cur.d, x.tail(space.multipliers),
                                cur.score.mu, true, space.points(x)};
  }
  return res;
}

ReplayCheck replay_candidate(const InverseCandidate& c,
                             const Eigen::VectorXd& ybar,
                             double strict_margin) {
  ReplayCheck chk;
  try {
    const DistanceMatrix d = DistanceMatrix::validate(c.d.entries(), true);
    chk.metric = true;
    chk.positive = min_off_diagonal(d.entries()) > 0.0;

    const ReducedProblem r = reduce(build_formulation(d));
    const DualPoint p{c.lambda, c.mu};
    chk.stationary = stationarity_residual(r, p, ybar) <= 1e-10;
    const ConeTest cone = dual_feasible(r, p);
    chk.positive_definite = cone.in_S_plus && cone.min_eig > strict_margin;

    const OracleResult oracle = brute_force_optimum(d, true);
    const Tour target = tour_from_reduced(r.map, ybar).canonical();
    const double base = tour_length(d, target);
    bool strict = true;
    for (const auto& [tour, len] : oracle.all_lengths) {
      if (tour != target && !(len - base > strict_margin)) strict = false;
    }
    chk.target_optimal = strict && oracle.best_tour == target;
  } catch (const Error&) {
    // Any validation failure leaves the remaining flags false.
  }
  return chk;
}

namespace {

InverseSearchReport merge(const Eigen::VectorXd& ybar, const InverseConfig& cfg,
                          std::vector<RestartResult>& results) {
  InverseSearchReport rep;
  rep.config = cfg;
  rep.ybar = ybar;
  rep.restarts = static_cast<int>(results.size());

  const RestartResult* best = nullptr;
  for (const auto& r : results) {
    rep.evaluations += r.evaluations;
    if (r.score.min_eig > kPdTolerance) ++rep.restarts_with_positive_min_eig;
    if (!r.best) continue;
    if (best == nullptr || r.score.score > best->score.score) best = &r;
  }
  if (best == nullptr) return rep;

  rep.best = best->best;
  rep.best_restart = best->restart;
  rep.best_score = best->score.score;
  rep.best_min_eig = best->score.min_eig;
  rep.stationarity_residual = best->score.stationarity_residual;
  rep.optimality_margins = best->score.margins;
  rep.edm_violations = best->score.edm_violation;

  const bool margins_ok = std::all_of(
      rep.optimality_margins.begin(), rep.optimality_margins.end(),
      [&](double m) { return m > cfg.strict_margin; });
  const bool candidate = rep.best_min_eig > cfg.strict_margin && margins_ok &&
                         rep.edm_violations == 0.0 &&
                         min_off_diagonal(rep.best->d.entries()) > 0.0 &&
                         rep.stationarity_residual <= 1e-10;
  if (candidate) {
    rep.replay = replay_candidate(*rep.best, ybar, cfg.strict_margin);
    if (rep.replay->passed()) {
      rep.verdict = InverseVerdict::FeasibleCounterexample;
    }
  }
  return rep;
}

void check_config(const Eigen::VectorXd& ybar, const InverseConfig& cfg) {
  if (cfg.n < 3) {
    throw Error(ErrorKind::ConfigError, "n must be >= 3");
  }
  if (cfg.n > kMaxOracleCities) {
    throw Error(ErrorKind::ConfigError,
                "n must be <= " + std::to_string(kMaxOracleCities));
  }
  if (cfg.restarts < 0 || cfg.local_iters < 0) {
    throw Error(ErrorKind::ConfigError, "restarts and local_iters must be >= 0");
  }
  if (!(cfg.lambda_box_factor > 0.0)) {
    throw Error(ErrorKind::ConfigError, "lambda_box_factor must be positive");
  }
  if (ybar.size() != (cfg.n - 1) * (cfg.n - 1)) {
    throw Error(ErrorKind::DimensionMismatch, "target vector length");
  }
}

}  // namespace

InverseSearchReport inverse_search_serial(const Eigen::VectorXd& ybar,
                                          const InverseConfig& cfg) {
  check_config(ybar, cfg);
  std::vector<RestartResult> results;
  results.reserve(cfg.restarts);
  for (int r = 0; r < cfg.restarts; ++r) {
    results.push_back(run_restart(ybar, cfg, r));
  }
  return merge(ybar, cfg, results);
}

InverseSearchReport inverse_search(const Eigen::VectorXd& ybar,
                                   const InverseConfig& cfg) {
  check_config(ybar, cfg);
  std::vector<RestartResult> results(cfg.restarts);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < cfg.restarts; ++r) {
    try {
      results[r] = run_restart(ybar, cfg, r);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return merge(ybar, cfg, results);
}

}  // namespace tspdual
