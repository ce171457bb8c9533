#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "thermoporo/mesh.hpp"
#include "thermoporo/reference_element.hpp"

namespace thermoporo {

enum class SpaceKind { Scalar, Vector };

/// Global numbering of a continuous Lagrange space.
///
/// Scalar numbering: vertices, then edges in sorted (min vertex, max vertex)
/// order with degree-1 dofs each (ordered from the lower to the higher
/// vertex index), then one interior dof per cell for degree 3. A vector
/// space is blocked by component: dof = component * scalar_size() + scalar dof.
class DofMap {
 public:
  DofMap(const TriMesh& mesh, SpaceKind kind, int degree);

  [[nodiscard]] SpaceKind kind() const { return kind_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int components() const { return kind_ == SpaceKind::Vector ? 2 : 1; }
  [[nodiscard]] int local_size() const { return local_size_; }
  [[nodiscard]] Index scalar_size() const { return scalar_size_; }
  [[nodiscard]] Index size() const { return components() * scalar_size_; }
  [[nodiscard]] const ReferenceElement& element() const { return element_; }

  /// Scalar dofs of a triangle in reference-element node order.
  [[nodiscard]] std::span<const Index> cell_dofs(Index cell) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(cell) * local_size_,
            static_cast<std::size_t>(local_size_)};
  }
  [[nodiscard]] Index dof(Index scalar_dof, int component) const {
    return component * scalar_size_ + scalar_dof;
  }
  /// Lagrange node of each scalar dof.
  [[nodiscard]] const std::vector<Point2>& coordinates() const { return coords_; }

  /// Sorted mesh edges used by the numbering.
  [[nodiscard]] const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }
  [[nodiscard]] Index edge_index(Index a, Index b) const;
  /// Scalar dofs on a mesh edge: both endpoint dofs and the interior ones.
  [[nodiscard]] std::vector<Index> edge_dofs(Index a, Index b) const;

  /// Nodal interpolation of a scalar function.
  template <class F>
  [[nodiscard]] std::vector<double> interpolate(F&& fn) const {
    std::vector<double> out(static_cast<std::size_t>(scalar_size_));
    for (Index i = 0; i < scalar_size_; ++i) out[i] = fn(coords_[i]);
    return out;
  }
  /// Nodal interpolation of a 2-vector function (vector spaces only).
  template <class F>
  [[nodiscard]] std::vector<double> interpolate_vector(F&& fn) const {
    std::vector<double> out(static_cast<std::size_t>(size()));
    for (Index i = 0; i < scalar_size_; ++i) {
      const Vec2 v = fn(coords_[i]);
      out[i] = v[0];
      out[static_cast<std::size_t>(scalar_size_ + i)] = v[1];
    }
    return out;
  }

 private:
  SpaceKind kind_;
  int degree_;
  ReferenceElement element_;
  int local_size_;
  Index scalar_size_ = 0;
  std::vector<Index> cell_dofs_;
  std::vector<Point2> coords_;
  std::vector<std::pair<Index, Index>> edges_;
  Index vertex_count_ = 0;
};

DofMap build_dofmap(const TriMesh& mesh, SpaceKind kind, int degree);

/// Which boundary edges to collect dofs from.
struct BoundarySelector {
  std::optional<BoundaryTag> tag;  ///< empty: whole boundary

  static BoundarySelector whole() { return {}; }
  static BoundarySelector tagged(BoundaryTag t) { return {t}; }
};

/// Sorted global dofs whose node lies on a selected boundary edge; both
/// components for vector spaces.
std::vector<Index> boundary_dofs(const DofMap& dofmap, const TriMesh& mesh,
                                 BoundarySelector selector);

}  // namespace thermoporo

namespace thermoporo {

/// The three discrete spaces of the four-field system: vector P_k for the
/// displacement, P_{k-1} for the pseudo-total pressure, and P_l shared by
/// the fluid pressure and the temperature.
struct Spaces {
  DofMap displacement;
  DofMap xi;
  DofMap scalar;  ///< W_h, used by both p and T

  [[nodiscard]] int k() const { return displacement.degree(); }
  [[nodiscard]] int l() const { return scalar.degree(); }
};

/// Throws InvalidInput unless k in {2, 3} and l in {1, 2, 3}.
Spaces build_spaces(const TriMesh& mesh, int k, int l);

}  // namespace thermoporo
