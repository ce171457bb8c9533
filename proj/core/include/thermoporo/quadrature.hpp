#pragma once

#include <vector>

#include "thermoporo/common.hpp"

namespace thermoporo {

/// Quadrature on the reference triangle; weights sum to 1/2.
struct QuadratureRule {
  std::vector<Point2> points;
  std::vector<double> weights;
  int exactness = 0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

inline constexpr int kMaxQuadratureExactness = 10;

/// Symmetric rule integrating every polynomial of total degree <= exactness
/// exactly; `exactness` of the result may exceed the request.
QuadratureRule quadrature(int exactness);

/// Gauss-Legendre rule with `n` points on [0, 1]: nodes and weights.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_legendre(int n);

}  // namespace thermoporo
