#include "tspdual/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace tspdual {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorKind::NegativeDistance: return "NegativeDistance";
    case ErrorKind::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorKind::TriangleViolation: return "TriangleViolation";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidTour: return "InvalidTour";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::TourDoesNotFixCityOne: return "TourDoesNotFixCityOne";
    case ErrorKind::NotDualFeasible: return "NotDualFeasible";
    case ErrorKind::StartNotDualFeasible: return "StartNotDualFeasible";
    case ErrorKind::InfeasibleTarget: return "InfeasibleTarget";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string pair_label(int i, int j) {
  std::ostringstream os;
  os << "(" << i + 1 << "," << j + 1 << ")";
  return os.str();
}

}  // namespace

DistanceMatrix DistanceMatrix::validate(const Eigen::MatrixXd& entries,
                                        bool metric) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorKind::InvalidInstance, "distance matrix is not square");
  }
  const auto n = static_cast<int>(entries.rows());
  if (n < 3) {
    throw Error(ErrorKind::InvalidInstance,
                "need n >= 3 cities, got n = " + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(entries(i, j))) {
        throw Error(ErrorKind::InvalidInstance,
                    "non-finite distance at " + pair_label(i, j));
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (entries(i, i) != 0.0) {
      throw Error(ErrorKind::NonzeroDiagonal,
                  "d" + pair_label(i, i) + " must be 0");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (entries(i, j) < 0.0) {
        throw Error(ErrorKind::NegativeDistance,
                    "d" + pair_label(i, j) + " < 0");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (entries(i, j) != entries(j, i)) {
        throw Error(ErrorKind::AsymmetricMatrix,
                    "d" + pair_label(i, j) + " != d" + pair_label(j, i));
      }
    }
  }
  if (metric) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const double via = entries(i, k) + entries(k, j);
          if (entries(i, j) > via + kTriangleSlack * std::max(1.0, via)) {
            throw Error(ErrorKind::TriangleViolation,
                        "d" + pair_label(i, j) + " exceeds the path via city " +
                            std::to_string(k + 1));
          }
        }
      }
    }
  }
  return DistanceMatrix(entries, metric);
}

Eigen::VectorXd DistanceMatrix::first_row() const {
  return entries_.row(0).tail(n() - 1).transpose();
}

Eigen::MatrixXd DistanceMatrix::trailing_block() const {
  return entries_.bottomRightCorner(n() - 1, n() - 1);
}

Tour::Tour(std::vector<int> zero_based) : order_(std::move(zero_based)) {
  std::vector<bool> seen(order_.size(), false);
  for (int city : order_) {
    if (city < 0 || city >= size() || seen[city]) {
      throw Error(ErrorKind::InvalidTour, "order is not a permutation of 1.." +
                                              std::to_string(size()));
    }
    seen[city] = true;
  }
}

Tour Tour::from_labels(std::initializer_list<int> labels) {
  return from_labels(std::span<const int>(labels.begin(), labels.size()));
}

Tour Tour::from_labels(std::span<const int> labels) {
  std::vector<int> order(labels.begin(), labels.end());
  for (int& c : order) --c;
  return Tour(std::move(order));
}

std::vector<int> Tour::labels() const {
  std::vector<int> out(order_);
  for (int& c : out) ++c;
  return out;
}

Tour Tour::canonical() const {
  const int n = size();
  if (n == 0) return *this;
  const auto start = std::find(order_.begin(), order_.end(), 0) - order_.begin();
  const int next = order_[(start + 1) % n];
  const int prev = order_[(start + n - 1) % n];
  std::vector<int> out(n);
  const int dir = next <= prev ? 1 : n - 1;
  for (int j = 0; j < n; ++j) {
    out[j] = order_[(start + static_cast<long>(j) * dir) % n];
  }
  Tour t;
  t.order_ = std::move(out);
  return t;
}

double tour_length(const DistanceMatrix& d, const Tour& t) {
  if (t.size() != d.n()) {
    throw Error(ErrorKind::DimensionMismatch,
                "tour visits " + std::to_string(t.size()) +
                    " cities, instance has " + std::to_string(d.n()));
  }
  const int n = t.size();
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += d(t[j], t[(j + 1) % n]);
  return total;
}

OracleResult brute_force_optimum(const DistanceMatrix& d, bool fix_first) {
  const int n = d.n();
  if (n > kMaxOracleCities) {
    throw Error(ErrorKind::InstanceTooLarge,
                "enumeration limited to n <= " +
                    std::to_string(kMaxOracleCities) + ", got n = " +
                    std::to_string(n));
  }
  OracleResult result;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // With fix_first the leading city stays put and only the tail permutes.
  const auto first = fix_first ? order.begin() + 1 : order.begin();
  do {
    Tour canon = Tour(order).canonical();
    if (result.all_lengths.contains(canon)) continue;
    const double len = tour_length(d, canon);
    result.all_lengths.emplace(std::move(canon), len);
  } while (std::next_permutation(first, order.end()));

  // std::map iterates in lexicographic order, so the first strict minimum
  // is the tie-break winner.
  bool have = false;
  for (const auto& [tour, len] : result.all_lengths) {
    if (!have || len < result.best_length) {
      result.best_tour = tour;
      result.best_length = len;
      have = true;
    }
  }
  return result;
}

DistanceMatrix distances_from_points(const Eigen::MatrixXd& points) {
  const auto n = static_cast<int>(points.rows());
  if (points.cols() != 2) {
    throw Error(ErrorKind::InvalidInstance, "points must be n x 2");
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = points(i, 0) - points(j, 0);
      const double dy = points(i, 1) - points(j, 1);
      d(i, j) = d(j, i) = std::sqrt(dx * dx + dy * dy);
    }
  }
  return DistanceMatrix::validate(d, true);
}

EuclideanInstance random_euclidean_instance(int n, std::uint64_t seed) {
  if (n < 3) {
    throw Error(ErrorKind::InvalidInstance,
                "need n >= 3 cities, got n = " + std::to_string(n));
  }
  std::mt19937_64 engine(seed);
  Eigen::MatrixXd points(n, 2);
  for (int i = 0; i < n; ++i) {
    points(i, 0) = uniform01(engine);
    points(i, 1) = uniform01(engine);
  }
  return {distances_from_points(points), points};
}

}  // namespace tspdual
