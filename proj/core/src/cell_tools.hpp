#pragma once

#include <span>
#include <vector>

#include "thermoporo/common.hpp"
#include "thermoporo/mesh.hpp"
#include "thermoporo/quadrature.hpp"
#include "thermoporo/reference_element.hpp"

namespace thermoporo::detail {

// Affine map of one triangle: x = a + J xhat.
struct CellGeometry {
  Point2 origin;
  Mat2 jac;
  double det;
  Mat2 inv_t;  // J^{-T}

  CellGeometry(const TriMesh& mesh, Index cell) {
    const auto& tri = mesh.triangles()[cell];
    const Point2 a = mesh.vertices()[tri[0]];
    const Point2 b = mesh.vertices()[tri[1]];
    const Point2 c = mesh.vertices()[tri[2]];
    origin = a;
    jac = {{{b.x - a.x, c.x - a.x}, {b.y - a.y, c.y - a.y}}};
    det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    inv_t = {{{jac[1][1] / det, -jac[1][0] / det}, {-jac[0][1] / det, jac[0][0] / det}}};
  }

  [[nodiscard]] Point2 map(Point2 ref) const {
    return {origin.x + jac[0][0] * ref.x + jac[0][1] * ref.y,
            origin.y + jac[1][0] * ref.x + jac[1][1] * ref.y};
  }
  [[nodiscard]] Vec2 physical_gradient(const Vec2& g) const {
    return {inv_t[0][0] * g[0] + inv_t[0][1] * g[1], inv_t[1][0] * g[0] + inv_t[1][1] * g[1]};
  }
};

// Basis values and reference gradients at every quadrature point.
struct Tabulation {
  int n = 0;
  std::vector<double> values;  // [q * n + i]
  std::vector<Vec2> grads;     // [q * n + i]

  Tabulation(const ReferenceElement& el, const QuadratureRule& rule) : n(el.node_count()) {
    values.resize(rule.size() * n);
    grads.resize(rule.size() * n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      el.evaluate(rule.points[q], std::span(values).subspan(q * n, n));
      el.gradients(rule.points[q], std::span(grads).subspan(q * n, n));
    }
  }
  [[nodiscard]] double value(std::size_t q, int i) const { return values[q * n + i]; }
  [[nodiscard]] const Vec2& grad(std::size_t q, int i) const { return grads[q * n + i]; }
};

}  // namespace thermoporo::detail
