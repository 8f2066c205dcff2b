#include "tspdual/reduction.hpp"

#include <string>

namespace tspdual {

IndexMap::IndexMap(int n) : n_(n) {
  if (n < 3) {
    throw Error(ErrorKind::InvalidInstance,
                "need n >= 3 cities, got n = " + std::to_string(n));
  }
  order_.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) order_.push_back(assignment_index(n, i, 0));
  for (int j = 1; j < n; ++j) order_.push_back(assignment_index(n, 0, j));
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) order_.push_back(assignment_index(n, i, j));
  }
}

Eigen::MatrixXd rearrange(const QpFormulation& f, const IndexMap& map) {
  const auto& p = map.permutation();
  const auto size = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd hat(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = 0; c < size; ++c) hat(r, c) = f.A(p[r], p[c]);
  }
  return hat;
}

ReducedProblem reduce(const QpFormulation& f) {
  const int n = f.n;
  ReducedProblem r;
  r.n = n;
  r.map = IndexMap(n);
  const int h = r.map.head_size();
  const int m = r.map.reduced_size();

  const Eigen::MatrixXd hat = rearrange(f, r.map);
  const auto a11 = hat.topLeftCorner(h, h);
  const auto a12 = hat.topRightCorner(h, m);
  const auto a21 = hat.bottomLeftCorner(m, h);

  Eigen::VectorXd head = Eigen::VectorXd::Zero(h);
  head(0) = 1.0;  // x_11 = 1, every other head entry vanishes

  r.A_r = hat.bottomRightCorner(m, m);
  r.b_r = -0.5 * (a21 * head + a12.transpose() * head);
  r.c0 = 0.5 * head.dot(a11 * head);

  r.E_r = Eigen::MatrixXd::Zero(r.multipliers(), m);
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      const int col = r.map.to_reduced(i, j);
      r.E_r(j - 1, col) = 1.0;
      // The city-n row is dropped: it follows from the others once x_11 = 1.
      if (i < n - 1) r.E_r((n - 1) + (i - 1), col) = 1.0;
    }
  }
  return r;
}

Eigen::VectorXd embed_tour(const IndexMap& map, const Tour& t) {
  const int n = map.n();
  if (t.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "tour size does not match n");
  }
  if (t[0] != 0) {
    throw Error(ErrorKind::TourDoesNotFixCityOne,
                "position 1 holds city " + std::to_string(t[0] + 1));
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(map.reduced_size());
  for (int j = 1; j < n; ++j) y(map.to_reduced(t[j], j)) = 1.0;
  return y;
}

Tour tour_from_reduced(const IndexMap& map, const Eigen::VectorXd& y) {
  const int n = map.n();
  if (y.size() != map.reduced_size()) {
    throw Error(ErrorKind::DimensionMismatch, "reduced vector length");
  }
  std::vector<int> order(n, -1);
  order[0] = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) {
      const double v = y(map.to_reduced(i, j));
      if (v == 1.0) {
        if (order[j] != -1) {
          throw Error(ErrorKind::InvalidTour,
                      "position " + std::to_string(j + 1) +
                          " holds more than one city");
        }
        order[j] = i;
      } else if (v != 0.0) {
        throw Error(ErrorKind::InvalidTour, "reduced vector is not binary");
      }
    }
    if (order[j] == -1) {
      throw Error(ErrorKind::InvalidTour,
                  "position " + std::to_string(j + 1) + " is empty");
    }
  }
  return Tour(std::move(order));
}

double reduced_objective(const ReducedProblem& r, const Eigen::VectorXd& y) {
  if (y.size() != r.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected vector of length " + std::to_string(r.size()) +
                    ", got " + std::to_string(y.size()));
  }
  return 0.5 * y.dot(r.A_r * y) - r.b_r.dot(y);
}

Eigen::MatrixXd four_city_constraint_display() {
  Eigen::MatrixXd e(5, 9);
  e << 1, 1, 1, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 1, 1, 1, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 1, 1, 1,
       1, 0, 0, 1, 0, 0, 1, 0, 0,
       0, 1, 0, 0, 1, 0, 0, 1, 0;
  return e;
}

bool matches_four_city_display(const ReducedProblem& r,
                               const DistanceMatrix& d) {
  if (r.n != 4 || d.n() != 4) return false;
  const Eigen::MatrixXd d2 = d.trailing_block();
  const Eigen::VectorXd d1 = d.first_row();
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);

  Eigen::MatrixXd a(9, 9);
  a << z, d2, z,
       d2, z, d2,
       z, d2, z;
  Eigen::VectorXd b(9);
  b << -d1, Eigen::VectorXd::Zero(3), -d1;

  return r.A_r == a && r.b_r == b && r.E_r == four_city_constraint_display();
}

}  // namespace tspdual
