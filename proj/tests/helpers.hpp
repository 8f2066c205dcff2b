#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tspdual/dual.hpp"
#include "tspdual/instance.hpp"
#include "tspdual/reduction.hpp"

namespace tspdual::testing {

// Corners of the unit square in order (0,0), (1,0), (1,1), (0,1).
inline DistanceMatrix unit_square() {
  const double s = std::sqrt(2.0);
  Eigen::MatrixXd d(4, 4);
  d << 0, 1, s, 1,
       1, 0, 1, s,
       s, 1, 0, 1,
       1, s, 1, 0;
  return DistanceMatrix::validate(d, true);
}

// Six distinct off-diagonal distances, no metric requirement.
inline DistanceMatrix distinct_four_city() {
  Eigen::MatrixXd d(4, 4);
  d << 0, 2, 3, 5,
       2, 0, 7, 11,
       3, 7, 0, 13,
       5, 11, 13, 0;
  return DistanceMatrix::validate(d, false);
}

// Every ordering of n cities (n! tours).
inline std::vector<Tour> all_tours(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Tour> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// Orderings with city 1 in position 1 ((n-1)! tours).
inline std::vector<Tour> tours_fixing_first(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Tour> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return out;
}

// Point of the PD cone: diagonally dominant mu plus Gaussian noise of the
// given scale, Gaussian lambda; resampled until strictly inside the cone.
template <class Engine>
DualPoint sample_s_plus(const ReducedProblem& r, Engine& rng, double noise = 1.0) {
  std::normal_distribution<double> gauss;
  const DualPoint base = default_dual_start(r);
  for (;;) {
    DualPoint p = base;
    for (auto& v : p.lambda) v = gauss(rng);
    for (auto& v : p.mu) v += noise * gauss(rng);
    if (dual_feasible(r, p).in_S_plus) return p;
  }
}

}  // namespace tspdual::testing
