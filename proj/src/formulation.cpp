#include "tspdual/formulation.hpp"

#include <string>

namespace tspdual {

namespace {

void require_length(const QpFormulation& f, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(f.n) * f.n) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected vector of length " + std::to_string(f.n * f.n) +
                    ", got " + std::to_string(x.size()));
  }
}

}  // namespace

QpFormulation build_formulation(const DistanceMatrix& d) {
  const int n = d.n();
  const int size = n * n;
  QpFormulation f;
  f.n = n;
  f.A = Eigen::MatrixXd::Zero(size, size);
  f.C = Eigen::MatrixXd::Zero(n, size);
  f.D = Eigen::MatrixXd::Zero(n, size);
  f.e = Eigen::VectorXd::Ones(n);

  for (int j = 0; j < n; ++j) {
    const int prev = (j + n - 1) % n;
    const int next = (j + 1) % n;
    for (int i = 0; i < n; ++i) {
      const int row = assignment_index(n, i, j);
      for (int k = 0; k < n; ++k) {
        // n >= 3 keeps prev != next, so each neighbour contributes once.
        f.A(row, assignment_index(n, k, prev)) += d(i, k);
        f.A(row, assignment_index(n, k, next)) += d(i, k);
      }
      f.C(j, row) = 1.0;
      f.D(i, row) = 1.0;
    }
  }
  return f;
}

Eigen::VectorXd encode_tour(const Tour& t) {
  const int n = t.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * n);
  for (int j = 0; j < n; ++j) x(assignment_index(n, t[j], j)) = 1.0;
  return x;
}

Tour decode_assignment(int n, const Eigen::VectorXd& x) {
  if (x.size() != static_cast<Eigen::Index>(n) * n) {
    throw Error(ErrorKind::DimensionMismatch, "assignment vector length");
  }
  std::vector<int> order(n, -1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = x(assignment_index(n, i, j));
      if (v == 1.0) {
        if (order[j] != -1) {
          throw Error(ErrorKind::InvalidTour,
                      "position " + std::to_string(j + 1) +
                          " holds more than one city");
        }
        order[j] = i;
      } else if (v != 0.0) {
        throw Error(ErrorKind::InvalidTour, "assignment vector is not binary");
      }
    }
    if (order[j] == -1) {
      throw Error(ErrorKind::InvalidTour,
                  "position " + std::to_string(j + 1) + " is empty");
    }
  }
  return Tour(std::move(order));
}

double objective(const QpFormulation& f, const Eigen::VectorXd& x) {
  require_length(f, x);
  return 0.5 * x.dot(f.A * x);
}

FeasibilityReport check_feasible(const QpFormulation& f,
                                 const Eigen::VectorXd& x, double tol) {
  require_length(f, x);
  FeasibilityReport r;
  r.position_residual = (f.C * x - f.e).lpNorm<Eigen::Infinity>();
  r.city_residual = (f.D * x - f.e).lpNorm<Eigen::Infinity>();
  r.binary_residual = (x.cwiseProduct(x) - x).lpNorm<Eigen::Infinity>();
  r.feasible = r.position_residual <= tol && r.city_residual <= tol &&
               r.binary_residual <= tol;
  return r;
}

}  // namespace tspdual
