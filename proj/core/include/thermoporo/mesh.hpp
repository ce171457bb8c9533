#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "thermoporo/common.hpp"

namespace thermoporo {

/// Partition of the boundary for the displacement field. Pressure and
/// temperature are Dirichlet on the whole boundary regardless of the tag.
enum class BoundaryTag { GammaD, GammaN };

struct BoundaryEdge {
  std::array<Index, 2> vertices;
  BoundaryTag tag = BoundaryTag::GammaD;
};

/// Assigns a tag to a boundary edge given its endpoints.
using TagRule = std::function<BoundaryTag(const Point2&, const Point2&)>;

/// Edges on the vertical sides x = lo.x, x = hi.x are GammaD, horizontal sides GammaN.
TagRule vertical_sides_clamped(Point2 lo, Point2 hi);

/// Every boundary edge is GammaD.
TagRule all_clamped();

/// Conforming triangulation of an axis-aligned rectangle.
///
/// Triangles are counter-clockwise vertex triples. `h()` is the largest
/// element diameter; `divisions()` is the number of cells per side of the
/// structured grid the mesh is equivalent to (used for 1/n table labels).
class TriMesh {
 public:
  TriMesh(std::vector<Point2> vertices, std::vector<std::array<Index, 3>> triangles,
          std::vector<BoundaryEdge> boundary_edges, Point2 lo, Point2 hi, int divisions);

  [[nodiscard]] const std::vector<Point2>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<std::array<Index, 3>>& triangles() const { return triangles_; }
  [[nodiscard]] const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  [[nodiscard]] Index vertex_count() const { return static_cast<Index>(vertices_.size()); }
  [[nodiscard]] Index triangle_count() const { return static_cast<Index>(triangles_.size()); }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] Point2 lower_corner() const { return lo_; }
  [[nodiscard]] Point2 upper_corner() const { return hi_; }
  [[nodiscard]] int divisions() const { return divisions_; }

  [[nodiscard]] double triangle_area(Index t) const;

 private:
  std::vector<Point2> vertices_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  Point2 lo_;
  Point2 hi_;
  int divisions_;
  double h_ = 0.0;
};

/// Structured nx-by-ny grid, each cell split along its bottom-left to
/// top-right diagonal.
TriMesh build_uniform_rect(int nx, int ny, Point2 lo, Point2 hi, const TagRule& tag_rule);

/// Regular (red) refinement: every triangle is split into four congruent
/// children through its edge midpoints. Boundary tags are inherited.
TriMesh refine_regular(const TriMesh& mesh);

/// Returns a description of every violated mesh invariant; empty when valid.
std::vector<std::string> check_invariants(const TriMesh& mesh);

/// Debug dump: vertex list, triangle list, tagged boundary edges.
void write_mesh_text(std::ostream& out, const TriMesh& mesh);

}  // namespace thermoporo
