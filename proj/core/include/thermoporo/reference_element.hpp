#pragma once

#include <span>
#include <vector>

#include "thermoporo/common.hpp"

namespace thermoporo {

/// Lagrange element of degree 1, 2 or 3 on the reference triangle
/// (0,0), (1,0), (0,1).
///
/// Node order: the three vertices; then for each local edge (0,1), (1,2),
/// (2,0) its interior nodes ordered from the edge's first vertex to its
/// second; then the centroid (degree 3 only).
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int node_count() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] const std::vector<Point2>& nodes() const { return nodes_; }

  /// Writes all basis values at the reference point into `values` (size node_count()).
  void evaluate(Point2 ref, std::span<double> values) const;

  /// Writes reference gradients of all basis functions into `grads`.
  void gradients(Point2 ref, std::span<Vec2> grads) const;

 private:
  int degree_;
  std::vector<Point2> nodes_;
};

/// Throws InvalidInput for degrees outside {1, 2, 3}.
ReferenceElement reference_element(int degree);

/// Local node indices lying on local edge e (vertex, interior nodes..., vertex).
std::vector<int> edge_nodes(int degree, int local_edge);

}  // namespace thermoporo
