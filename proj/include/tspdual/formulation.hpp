#pragma once

#include <Eigen/Dense>

#include "tspdual/instance.hpp"

namespace tspdual {

// Position-major layout of the binary assignment vector: all cities of
// position 1, then position 2, and so on. city and position are 0-based.
inline int assignment_index(int n, int city, int position) {
  return position * n + city;
}

// Quadratic program  min 1/2 X'AX  s.t.  CX = e, DX = e, X∘X = X.
struct QpFormulation {
  int n = 0;
  Eigen::MatrixXd A;  // n^2 x n^2
  Eigen::MatrixXd C;  // n x n^2, row j: position j holds one city
  Eigen::MatrixXd D;  // n x n^2, row i: city i occupies one position
  Eigen::VectorXd e;  // ones, length n
};

// A[(j,i), (j',k)] = d_ik * ([j' = j-1] + [j' = j+1]) with positions taken
// cyclically.
QpFormulation build_formulation(const DistanceMatrix& d);

Eigen::VectorXd encode_tour(const Tour& t);

// Inverse of encode_tour. Throws InvalidTour unless x is a permutation
// encoding.
Tour decode_assignment(int n, const Eigen::VectorXd& x);

// 1/2 x'Ax for any real x of length n^2.
double objective(const QpFormulation& f, const Eigen::VectorXd& x);

struct FeasibilityReport {
  double position_residual = 0.0;  // ||Cx - e||_inf
  double city_residual = 0.0;      // ||Dx - e||_inf
  double binary_residual = 0.0;    // ||x∘x - x||_inf
  bool feasible = false;
};

FeasibilityReport check_feasible(const QpFormulation& f,
                                 const Eigen::VectorXd& x, double tol);

}  // namespace tspdual
