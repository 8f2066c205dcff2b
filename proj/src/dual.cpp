#include "tspdual/dual.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tspdual {

namespace {

void require_dimensions(const ReducedProblem& r, const DualPoint& p) {
  if (p.lambda.size() != r.multipliers() || p.mu.size() != r.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "dual point needs lambda of length " +
                    std::to_string(r.multipliers()) + " and mu of length " +
                    std::to_string(r.size()));
  }
}

double smallest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::GradientSmall: return "GradientSmall";
    case Termination::Stalled: return "Stalled";
    case Termination::IterationCap: return "IterationCap";
    case Termination::LeftCone: return "LeftCone";
  }
  return "Unknown";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NotDualFeasible: return "NotDualFeasible";
    case Verdict::NotCritical: return "NotCritical";
    case Verdict::NonBinaryRecovery: return "NonBinaryRecovery";
    case Verdict::InfeasibleRecovery: return "InfeasibleRecovery";
    case Verdict::SuboptimalRecovery: return "SuboptimalRecovery";
    case Verdict::ConfirmsTheorem2: return "ConfirmsTheorem2";
  }
  return "Unknown";
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble(const ReducedProblem& r,
                                                     const DualPoint& p) {
  require_dimensions(r, p);
  Eigen::MatrixXd a = r.A_r;
  a.diagonal() += p.mu;
  Eigen::VectorXd b = r.b_r + 0.5 * p.mu - r.E_r.transpose() * p.lambda;
  return {std::move(a), std::move(b)};
}

ConeTest dual_feasible(const ReducedProblem& r, const DualPoint& p) {
  const auto [a, b] = assemble(r, p);
  ConeTest t;
  t.min_eig = smallest_eigenvalue(a);
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  t.in_S_plus = llt.info() == Eigen::Success && t.min_eig > kPdTolerance;
  return t;
}

DualEvaluation dual_value(const ReducedProblem& r, const DualPoint& p) {
  const auto [a, b] = assemble(r, p);
  DualEvaluation ev;
  ev.min_eig = smallest_eigenvalue(a);
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  ev.in_S_plus = llt.info() == Eigen::Success && ev.min_eig > kPdTolerance;
  if (!ev.in_S_plus) {
    throw Error(ErrorKind::NotDualFeasible,
                "smallest eigenvalue " + std::to_string(ev.min_eig) +
                    " is not above the PD tolerance");
  }
  ev.Y = llt.solve(b);
  ev.value = -0.5 * b.dot(ev.Y) - p.lambda.sum();
  ev.grad_lambda = r.E_r * ev.Y - Eigen::VectorXd::Ones(r.multipliers());
  ev.grad_mu = 0.5 * (ev.Y.cwiseProduct(ev.Y) - ev.Y);
  return ev;
}

double lagrangian(const ReducedProblem& r, const DualPoint& p,
                  const Eigen::VectorXd& y) {
  require_dimensions(r, p);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(r.multipliers());
  return reduced_objective(r, y) + p.lambda.dot(r.E_r * y - ones) +
         0.5 * p.mu.dot(y.cwiseProduct(y) - y);
}

DualPoint default_dual_start(const ReducedProblem& r) {
  DualPoint p;
  p.lambda = Eigen::VectorXd::Zero(r.multipliers());
  p.mu = r.A_r.cwiseAbs().rowwise().sum().array() + 1.0;
  return p;
}

AscentResult dual_ascent(const ReducedProblem& r, const DualPoint& start,
                         const AscentConfig& cfg) {
  require_dimensions(r, start);
  if (!dual_feasible(r, start).in_S_plus) {
    throw Error(ErrorKind::StartNotDualFeasible,
                "ascent must start inside the PD cone");
  }
  AscentResult res;
  DualPoint cur = start;
  DualEvaluation ev = dual_value(r, cur);
  res.trajectory.push_back({ev.value, ev.gradient_norm(), ev.min_eig});

  double step = cfg.initial_step;
  res.termination = Termination::IterationCap;
  while (res.iterations < cfg.max_iter) {
    const double gnorm = ev.gradient_norm();
    if (gnorm < cfg.gtol) {
      res.termination = Termination::GradientSmall;
      break;
    }
    bool accepted = false;
    bool any_inside = false;
    DualPoint trial;
    DualEvaluation trial_ev;
    for (double t = step; t >= cfg.min_step; t *= 0.5) {
      trial.lambda = cur.lambda + t * ev.grad_lambda;
      trial.mu = cur.mu + t * ev.grad_mu;
      if (!dual_feasible(r, trial).in_S_plus) continue;
      any_inside = true;
      trial_ev = dual_value(r, trial);
      if (trial_ev.value >= ev.value + cfg.armijo * t * gnorm * gnorm) {
        accepted = true;
        step = std::min(2.0 * t, 1e6);
        break;
      }
    }
    if (!accepted) {
      res.termination =
          any_inside ? Termination::Stalled : Termination::LeftCone;
      break;
    }
    cur = std::move(trial);
    ev = std::move(trial_ev);
    ++res.iterations;
    res.trajectory.push_back({ev.value, ev.gradient_norm(), ev.min_eig});

    const auto k = res.trajectory.size();
    if (k > static_cast<std::size_t>(cfg.stall_window) &&
        ev.value - res.trajectory[k - 1 - cfg.stall_window].value < cfg.ftol) {
      res.termination = Termination::Stalled;
      break;
    }
  }
  res.best_point = std::move(cur);
  res.best_value = ev.value;
  return res;
}

VerifyReport verify_global(const ReducedProblem& r, const DualPoint& p,
                           const OracleResult& oracle,
                           const VerifyConfig& cfg) {
  VerifyReport rep;
  rep.oracle_optimum = oracle.best_length;
  const ConeTest cone = dual_feasible(r, p);
  rep.min_eig = cone.min_eig;
  rep.in_S_plus = cone.in_S_plus;
  if (!rep.in_S_plus) {
    rep.verdict = Verdict::NotDualFeasible;
    return rep;
  }
  const DualEvaluation ev = dual_value(r, p);
  const Eigen::VectorXd& y = ev.Y;
  rep.gradient_norm = ev.gradient_norm();
  rep.critical = rep.gradient_norm <= cfg.gtol;

  const Eigen::VectorXd rounded = y.array().round();
  rep.binary_deviation = (y - rounded).lpNorm<Eigen::Infinity>();
  rep.binary = rep.binary_deviation <= cfg.bin_tol &&
               ((rounded.array() == 0.0) || (rounded.array() == 1.0)).all();

  rep.feasibility_residual =
      (r.E_r * y - Eigen::VectorXd::Ones(r.multipliers()))
          .lpNorm<Eigen::Infinity>();
  rep.feasible = rep.feasibility_residual <= cfg.feas_tol;

  rep.recovered_objective = reduced_objective(r, y) + r.c0;
  rep.optimal =
      std::abs(rep.recovered_objective - oracle.best_length) <= cfg.opt_tol;

  if (!rep.critical) {
    rep.verdict = Verdict::NotCritical;
  } else if (!rep.binary) {
    rep.verdict = Verdict::NonBinaryRecovery;
  } else if (!rep.feasible) {
    rep.verdict = Verdict::InfeasibleRecovery;
  } else if (!rep.optimal) {
    rep.verdict = Verdict::SuboptimalRecovery;
  } else {
    rep.verdict = Verdict::ConfirmsTheorem2;
  }
  return rep;
}

}  // namespace tspdual
