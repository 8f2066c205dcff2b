#pragma once

#include <vector>

#include <Eigen/Dense>

#include "tspdual/formulation.hpp"
#include "tspdual/instance.hpp"

namespace tspdual {

// Rearrangement X -> (X1; Y) obtained by fixing city 1 in position 1.
//
// X1 collects the 2n-1 entries touching city 1 or position 1:
// [x_11, x_21, ..., x_n1, x_12, ..., x_1n]. Y collects x_ij for cities and
// positions 2..n, position-major, so that (city i, position j) lands at
// reduced slot (j-2)(n-1) + (i-2) (0-based).
class IndexMap {
 public:
  explicit IndexMap(int n);

  int n() const noexcept { return n_; }
  int head_size() const noexcept { return 2 * n_ - 1; }
  int reduced_size() const noexcept { return (n_ - 1) * (n_ - 1); }

  // full_index(p) = index into X of the p-th entry of (X1; Y).
  const std::vector<int>& permutation() const noexcept { return order_; }

  // 0-based city, position in 1..n-1 (i.e. cities/positions 2..n).
  int to_reduced(int city, int position) const {
    return (position - 1) * (n_ - 1) + (city - 1);
  }

 private:
  int n_;
  std::vector<int> order_;
};

struct ReducedProblem {
  int n = 0;
  Eigen::MatrixXd A_r;  // (n-1)^2 square
  Eigen::VectorXd b_r;  // (n-1)^2
  Eigen::MatrixXd E_r;  // (2n-3) x (n-1)^2, C_r stacked over D_r
  double c0 = 0.0;
  IndexMap map{3};

  int size() const noexcept { return map.reduced_size(); }
  int multipliers() const noexcept { return 2 * n - 3; }
};

// Full symmetric permutation of A into (X1; Y) order.
Eigen::MatrixXd rearrange(const QpFormulation& f, const IndexMap& map);

ReducedProblem reduce(const QpFormulation& f);

// Binary Y of a tour whose first city is city 1.
Eigen::VectorXd embed_tour(const IndexMap& map, const Tour& t);

// Tour encoded by a binary reduced vector Y (city 1 placed first).
Tour tour_from_reduced(const IndexMap& map, const Eigen::VectorXd& y);

// 1/2 Y'A_rY - b_r'Y.
double reduced_objective(const ReducedProblem& r, const Eigen::VectorXd& y);

// True when the n = 4 reduced data coincide entrywise with the closed-form
// block displays: A_r = [0 d2 0; d2 0 d2; 0 d2 0], b_r = (-d1; 0; -d1) and
// the fixed 5x9 constraint matrix. Always false for n != 4.
bool matches_four_city_display(const ReducedProblem& r,
                               const DistanceMatrix& d);

// The 5x9 E_r of the four-city instance, written out literally.
Eigen::MatrixXd four_city_constraint_display();

}  // namespace tspdual
