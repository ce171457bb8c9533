#include "thermoporo/dofmap.hpp"

#include <algorithm>

namespace thermoporo {

namespace {

constexpr int kEdgeVertices[3][2] = {{0, 1}, {1, 2}, {2, 0}};

std::pair<Index, Index> ordered(Index a, Index b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

DofMap::DofMap(const TriMesh& mesh, SpaceKind kind, int degree)
    : kind_(kind), degree_(degree), element_(degree), local_size_(element_.node_count()) {
  vertex_count_ = mesh.vertex_count();

  edges_.reserve(3 * mesh.triangles().size());
  for (const auto& tri : mesh.triangles()) {
    for (const auto& ev : kEdgeVertices) edges_.push_back(ordered(tri[ev[0]], tri[ev[1]]));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  const Index per_edge = degree - 1;
  const Index per_cell = degree == 3 ? 1 : 0;
  const Index edge_base = vertex_count_;
  const Index cell_base = edge_base + per_edge * static_cast<Index>(edges_.size());
  scalar_size_ = cell_base + per_cell * mesh.triangle_count();

  coords_.assign(static_cast<std::size_t>(scalar_size_), Point2{});
  const auto& verts = mesh.vertices();
  std::copy(verts.begin(), verts.end(), coords_.begin());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Point2 a = verts[edges_[e].first];
    const Point2 b = verts[edges_[e].second];
    for (Index s = 0; s < per_edge; ++s) {
      const double w = static_cast<double>(s + 1) / degree;
      coords_[edge_base + static_cast<Index>(e) * per_edge + s] = {(1.0 - w) * a.x + w * b.x,
                                                                  (1.0 - w) * a.y + w * b.y};
    }
  }

  cell_dofs_.resize(static_cast<std::size_t>(mesh.triangle_count()) * local_size_);
  for (Index c = 0; c < mesh.triangle_count(); ++c) {
    const auto& tri = mesh.triangles()[c];
    Index* out = cell_dofs_.data() + static_cast<std::size_t>(c) * local_size_;
    for (int v = 0; v < 3; ++v) out[v] = tri[v];
    for (int le = 0; le < 3; ++le) {
      const Index a = tri[kEdgeVertices[le][0]];
      const Index b = tri[kEdgeVertices[le][1]];
      const Index e = edge_index(a, b);
      for (Index s = 0; s < per_edge; ++s) {
        // Local nodes run from a to b; global ones from min to max vertex.
        const Index global_s = a < b ? s : per_edge - 1 - s;
        out[3 + le * per_edge + s] = edge_base + e * per_edge + global_s;
      }
    }
    if (per_cell == 1) {
      out[local_size_ - 1] = cell_base + c;
      const Point2 a = verts[tri[0]], b = verts[tri[1]], d = verts[tri[2]];
      coords_[cell_base + c] = {(a.x + b.x + d.x) / 3.0, (a.y + b.y + d.y) / 3.0};
    }
  }
}

Index DofMap::edge_index(Index a, Index b) const {
  const auto key = ordered(a, b);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) {
    throw InvalidInput("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") is not a mesh edge");
  }
  return static_cast<Index>(it - edges_.begin());
}

std::vector<Index> DofMap::edge_dofs(Index a, Index b) const {
  std::vector<Index> out{a, b};
  const Index per_edge = degree_ - 1;
  const Index e = edge_index(a, b);
  for (Index s = 0; s < per_edge; ++s) out.push_back(vertex_count_ + e * per_edge + s);
  return out;
}

DofMap build_dofmap(const TriMesh& mesh, SpaceKind kind, int degree) {
  return DofMap(mesh, kind, degree);
}

std::vector<Index> boundary_dofs(const DofMap& dofmap, const TriMesh& mesh,
                                 BoundarySelector selector) {
  std::vector<Index> scalar;
  for (const auto& edge : mesh.boundary_edges()) {
    if (selector.tag && edge.tag != *selector.tag) continue;
    const auto dofs = dofmap.edge_dofs(edge.vertices[0], edge.vertices[1]);
    scalar.insert(scalar.end(), dofs.begin(), dofs.end());
  }
  std::sort(scalar.begin(), scalar.end());
  scalar.erase(std::unique(scalar.begin(), scalar.end()), scalar.end());

  std::vector<Index> out;
  out.reserve(scalar.size() * static_cast<std::size_t>(dofmap.components()));
  for (int c = 0; c < dofmap.components(); ++c) {
    for (Index s : scalar) out.push_back(dofmap.dof(s, c));
  }
  return out;
}

}  // namespace thermoporo

namespace thermoporo {

Spaces build_spaces(const TriMesh& mesh, int k, int l) {
  if (k < 2 || k > 3) {
    throw InvalidInput("displacement degree k must be 2 or 3 (Taylor-Hood pairs P_k/P_{k-1})");
  }
  if (l < 1 || l > 3) throw InvalidInput("pressure/temperature degree l must be 1, 2 or 3");
  return Spaces{DofMap(mesh, SpaceKind::Vector, k), DofMap(mesh, SpaceKind::Scalar, k - 1),
                DofMap(mesh, SpaceKind::Scalar, l)};
}

}  // namespace thermoporo
