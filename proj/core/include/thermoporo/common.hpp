#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace thermoporo {

using Index = std::int32_t;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Plain 2-vector used for displacements, tractions and gradients.
using Vec2 = std::array<double, 2>;

/// Row-major 2x2 matrix; for gradients of vector fields entry [c][d] is d u_c / d x_d.
using Mat2 = std::array<std::array<double, 2>, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

/// Rejected user input (bad mesh sizes, unsupported degrees, parameter conflicts).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear solve or time step that could not be completed.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thermoporo
