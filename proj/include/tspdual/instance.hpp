#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tspdual/error.hpp"

namespace tspdual {

// Symmetric, nonnegative, zero-diagonal city-to-city distances. Construct
// only through validate(); the object is immutable afterwards.
class DistanceMatrix {
 public:
  static DistanceMatrix validate(const Eigen::MatrixXd& entries,
                                 bool metric = false);

  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  bool metric() const noexcept { return metric_; }

  // 0-based access.
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }

  // First row without the diagonal entry: (d_12, ..., d_1n).
  Eigen::VectorXd first_row() const;
  // Trailing (n-1)x(n-1) principal block over cities 2..n.
  Eigen::MatrixXd trailing_block() const;

 private:
  DistanceMatrix(Eigen::MatrixXd entries, bool metric)
      : entries_(std::move(entries)), metric_(metric) {}

  Eigen::MatrixXd entries_;
  bool metric_ = false;
};

// Relative slack admitted when testing d_ij <= d_ik + d_kj, so that
// rounding in Euclidean distances of (nearly) collinear points is accepted.
inline constexpr double kTriangleSlack = 1e-12;

// A cyclic visiting order. Stored 0-based; labels() gives 1-based cities.
class Tour {
 public:
  Tour() = default;
  explicit Tour(std::vector<int> zero_based);
  static Tour from_labels(std::initializer_list<int> labels);
  static Tour from_labels(std::span<const int> labels);

  int size() const noexcept { return static_cast<int>(order_.size()); }
  int operator[](int position) const { return order_[position]; }
  const std::vector<int>& order() const noexcept { return order_; }
  std::vector<int> labels() const;

  // City 1 first, then the direction whose second city has the smaller index.
  Tour canonical() const;

  friend bool operator==(const Tour&, const Tour&) = default;
  friend auto operator<=>(const Tour&, const Tour&) = default;

 private:
  std::vector<int> order_;
};

struct OracleResult {
  Tour best_tour;
  double best_length = 0.0;
  // Keyed by canonical tour; lengths are those of the canonical form.
  std::map<Tour, double> all_lengths;
};

inline constexpr int kMaxOracleCities = 10;

double tour_length(const DistanceMatrix& d, const Tour& t);

// Exhaustive enumeration. Tie-break: lexicographically smallest canonical
// tour. Throws InstanceTooLarge above kMaxOracleCities.
OracleResult brute_force_optimum(const DistanceMatrix& d, bool fix_first = true);

struct EuclideanInstance {
  DistanceMatrix d;
  Eigen::MatrixXd points;  // n x 2
};

// Points uniform in the unit square from a std::mt19937_64 stream; the
// 53-bit conversion is done by hand so output is identical across
// standard library implementations.
EuclideanInstance random_euclidean_instance(int n, std::uint64_t seed);

// Euclidean distances of the given n x 2 point set (n >= 3).
DistanceMatrix distances_from_points(const Eigen::MatrixXd& points);

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace tspdual
