#include "thermoporo/assembly.hpp"

#include <algorithm>
#include <map>

#include "cell_tools.hpp"
#include "thermoporo/quadrature.hpp"

namespace thermoporo {

namespace {

using detail::CellGeometry;
using detail::Tabulation;

int form_exactness(int deg_a, int deg_b) { return std::max(2, 2 * std::max(deg_a, deg_b)); }

}  // namespace

SparseMatrix assemble_mass(const TriMesh& mesh, const DofMap& rows, const DofMap& cols) {
  const QuadratureRule rule = quadrature(form_exactness(rows.degree(), cols.degree()));
  const Tabulation tr(rows.element(), rule);
  const Tabulation tc(cols.element(), rule);
  const int nr = rows.local_size();
  const int nc = cols.local_size();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(mesh.triangle_count()) * nr * nc);
  std::vector<double> local(static_cast<std::size_t>(nr * nc));
  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const CellGeometry geo(mesh, cell);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * std::abs(geo.det);
      for (int i = 0; i < nr; ++i) {
        const double wi = w * tr.value(q, i);
        for (int j = 0; j < nc; ++j) local[i * nc + j] += wi * tc.value(q, j);
      }
    }
    const auto rd = rows.cell_dofs(cell);
    const auto cd = cols.cell_dofs(cell);
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nc; ++j) trip.push_back({rd[i], cd[j], local[i * nc + j]});
  }
  return SparseMatrix::from_triplets(rows.scalar_size(), cols.scalar_size(), trip);
}

SparseMatrix assemble_stiffness(const TriMesh& mesh, const DofMap& space, const SPD2& k) {
  const QuadratureRule rule = quadrature(form_exactness(space.degree(), space.degree()));
  const Tabulation tab(space.element(), rule);
  const int n = space.local_size();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(mesh.triangle_count()) * n * n);
  std::vector<double> local(static_cast<std::size_t>(n * n));
  std::vector<Vec2> g(static_cast<std::size_t>(n));
  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const CellGeometry geo(mesh, cell);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * std::abs(geo.det);
      for (int i = 0; i < n; ++i) g[i] = geo.physical_gradient(tab.grad(q, i));
      for (int i = 0; i < n; ++i) {
        const Vec2 kg = k.apply(g[i]);
        for (int j = 0; j < n; ++j) local[i * n + j] += w * dot(kg, g[j]);
      }
    }
    const auto d = space.cell_dofs(cell);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) trip.push_back({d[i], d[j], local[i * n + j]});
  }
  return SparseMatrix::from_triplets(space.scalar_size(), space.scalar_size(), trip);
}

SparseMatrix assemble_elasticity(const TriMesh& mesh, const DofMap& space, double mu) {
  if (space.kind() != SpaceKind::Vector) throw InvalidInput("elasticity needs a vector space");
  const QuadratureRule rule = quadrature(form_exactness(space.degree(), space.degree()));
  const Tabulation tab(space.element(), rule);
  const int n = space.local_size();
  const int m = 2 * n;  // local index = component * n + node
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(mesh.triangle_count()) * m * m);
  std::vector<double> local(static_cast<std::size_t>(m * m));
  std::vector<Vec2> g(static_cast<std::size_t>(n));
  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const CellGeometry geo(mesh, cell);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = mu * rule.weights[q] * std::abs(geo.det);
      for (int i = 0; i < n; ++i) g[i] = geo.physical_gradient(tab.grad(q, i));
      // 2 mu eps(phi_i e_c) : eps(phi_j e_d) = mu (delta_cd gi.gj + d_d phi_i d_c phi_j)
      for (int d = 0; d < 2; ++d) {
        for (int j = 0; j < n; ++j) {
          for (int c = 0; c < 2; ++c) {
            for (int i = 0; i < n; ++i) {
              double v = g[i][d] * g[j][c];
              if (c == d) v += dot(g[i], g[j]);
              local[(d * n + j) * m + (c * n + i)] += w * v;
            }
          }
        }
      }
    }
    const auto dofs = space.cell_dofs(cell);
    for (int a = 0; a < m; ++a) {
      const Index ra = space.dof(dofs[a % n], a / n);
      for (int b = 0; b < m; ++b) {
        trip.push_back({ra, space.dof(dofs[b % n], b / n), local[a * m + b]});
      }
    }
  }
  return SparseMatrix::from_triplets(space.size(), space.size(), trip);
}

SparseMatrix assemble_divergence(const TriMesh& mesh, const DofMap& vs, const DofMap& ss) {
  if (vs.kind() != SpaceKind::Vector) throw InvalidInput("divergence needs a vector space");
  const QuadratureRule rule = quadrature(form_exactness(vs.degree(), ss.degree()));
  const Tabulation tv(vs.element(), rule);
  const Tabulation ts(ss.element(), rule);
  const int nv = vs.local_size();
  const int ns = ss.local_size();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(mesh.triangle_count()) * 2 * nv * ns);
  std::vector<double> local(static_cast<std::size_t>(2 * nv * ns));
  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const CellGeometry geo(mesh, cell);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * std::abs(geo.det);
      for (int j = 0; j < nv; ++j) {
        const Vec2 gj = geo.physical_gradient(tv.grad(q, j));
        for (int d = 0; d < 2; ++d) {
          for (int k = 0; k < ns; ++k) local[(d * nv + j) * ns + k] += w * gj[d] * ts.value(q, k);
        }
      }
    }
    const auto vd = vs.cell_dofs(cell);
    const auto sd = ss.cell_dofs(cell);
    for (int d = 0; d < 2; ++d)
      for (int j = 0; j < nv; ++j)
        for (int k = 0; k < ns; ++k)
          trip.push_back({vs.dof(vd[j], d), sd[k], local[(d * nv + j) * ns + k]});
  }
  return SparseMatrix::from_triplets(vs.size(), ss.scalar_size(), trip);
}

FormSet assemble_forms(const TriMesh& mesh, const Spaces& spaces, const ModelParams& params) {
  FormSet forms;
  forms.elasticity = assemble_elasticity(mesh, spaces.displacement, params.mu);
  forms.divergence = assemble_divergence(mesh, spaces.displacement, spaces.xi);
  forms.mass_xi = assemble_mass(mesh, spaces.xi, spaces.xi);
  forms.mass_scalar = assemble_mass(mesh, spaces.scalar, spaces.scalar);
  forms.mass_xi_scalar = assemble_mass(mesh, spaces.xi, spaces.scalar);
  forms.stiffness_p = assemble_stiffness(mesh, spaces.scalar, params.K);
  forms.stiffness_T = assemble_stiffness(mesh, spaces.scalar, params.Theta);
  return forms;
}

std::vector<double> assemble_load(const TriMesh& mesh, const DofMap& space, const ScalarField& f,
                                  double t, int exactness) {
  std::vector<double> out(static_cast<std::size_t>(space.size()), 0.0);
  if (!f) return out;
  const QuadratureRule rule = quadrature(exactness);
  const Tabulation tab(space.element(), rule);
  const int n = space.local_size();
  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const CellGeometry geo(mesh, cell);
    const auto dofs = space.cell_dofs(cell);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double fv = f(geo.map(rule.points[q]), t) * rule.weights[q] * std::abs(geo.det);
      for (int i = 0; i < n; ++i) out[dofs[i]] += fv * tab.value(q, i);
    }
  }
  return out;
}

std::vector<double> assemble_load(const TriMesh& mesh, const DofMap& space, const VectorField& f,
                                  double t, int exactness) {
  if (space.kind() != SpaceKind::Vector) throw InvalidInput("vector load needs a vector space");
  std::vector<double> out(static_cast<std::size_t>(space.size()), 0.0);
  if (!f) return out;
  const QuadratureRule rule = quadrature(exactness);
  const Tabulation tab(space.element(), rule);
  const int n = space.local_size();
  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const CellGeometry geo(mesh, cell);
    const auto dofs = space.cell_dofs(cell);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * std::abs(geo.det);
      const Vec2 fv = f(geo.map(rule.points[q]), t);
      for (int i = 0; i < n; ++i) {
        const double phi = w * tab.value(q, i);
        out[space.dof(dofs[i], 0)] += fv[0] * phi;
        out[space.dof(dofs[i], 1)] += fv[1] * phi;
      }
    }
  }
  return out;
}

std::vector<double> assemble_neumann_traction(const TriMesh& mesh, const DofMap& space,
                                              const TractionField& traction, double t,
                                              BoundaryTag tag, int points_per_edge) {
  if (space.kind() != SpaceKind::Vector) throw InvalidInput("traction needs a vector space");
  std::vector<double> out(static_cast<std::size_t>(space.size()), 0.0);
  if (!traction) return out;

  std::map<std::pair<Index, Index>, bool> wanted;
  for (const auto& e : mesh.boundary_edges()) {
    if (e.tag == tag) {
      wanted[{std::min(e.vertices[0], e.vertices[1]), std::max(e.vertices[0], e.vertices[1])}] =
          true;
    }
  }
  if (wanted.empty()) return out;

  static constexpr int kEdge[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  const Point2 corners[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const LineRule line = gauss_legendre(points_per_edge);
  const auto& el = space.element();
  const int n = space.local_size();
  std::vector<double> phi(static_cast<std::size_t>(n));

  for (Index cell = 0; cell < mesh.triangle_count(); ++cell) {
    const auto& tri = mesh.triangles()[cell];
    for (int le = 0; le < 3; ++le) {
      const Index a = tri[kEdge[le][0]];
      const Index b = tri[kEdge[le][1]];
      if (!wanted.contains({std::min(a, b), std::max(a, b)})) continue;
      const Point2 pa = mesh.vertices()[a];
      const Point2 pb = mesh.vertices()[b];
      const double len = distance(pa, pb);
      // Counter-clockwise cell: the outward normal is the tangent rotated clockwise.
      const Vec2 normal{(pb.y - pa.y) / len, -(pb.x - pa.x) / len};
      const Point2 ra = corners[kEdge[le][0]];
      const Point2 rb = corners[kEdge[le][1]];
      const auto dofs = space.cell_dofs(cell);
      for (std::size_t q = 0; q < line.points.size(); ++q) {
        const double s = line.points[q];
        const Point2 ref{ra.x + s * (rb.x - ra.x), ra.y + s * (rb.y - ra.y)};
        const Point2 x{pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)};
        const Vec2 tr = traction(x, t, normal);
        el.evaluate(ref, phi);
        const double w = line.weights[q] * len;
        for (int i = 0; i < n; ++i) {
          out[space.dof(dofs[i], 0)] += w * tr[0] * phi[i];
          out[space.dof(dofs[i], 1)] += w * tr[1] * phi[i];
        }
      }
    }
  }
  return out;
}

DirichletConstraint::DirichletConstraint(const SparseMatrix& matrix, std::vector<Index> dofs)
    : dofs_(std::move(dofs)) {
  std::sort(dofs_.begin(), dofs_.end());
  dofs_.erase(std::unique(dofs_.begin(), dofs_.end()), dofs_.end());
  const Index n = matrix.rows();
  std::vector<Index> position(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < dofs_.size(); ++k) {
    if (dofs_[k] < 0 || dofs_[k] >= n) throw InvalidInput("Dirichlet dof out of range");
    position[dofs_[k]] = static_cast<Index>(k);
  }

  std::vector<Triplet> kept;
  std::vector<Triplet> eliminated;
  kept.reserve(matrix.nonzeros());
  const auto& off = matrix.row_offsets();
  const auto& col = matrix.col_indices();
  const auto& val = matrix.values();
  for (Index r = 0; r < n; ++r) {
    if (position[r] >= 0) {
      kept.push_back({r, r, 1.0});
      continue;
    }
    for (Index k = off[r]; k < off[r + 1]; ++k) {
      if (position[col[k]] >= 0) {
        eliminated.push_back({r, position[col[k]], val[k]});
      } else {
        kept.push_back({r, col[k], val[k]});
      }
    }
  }
  constrained_ = SparseMatrix::from_triplets(n, matrix.cols(), kept);
  eliminated_columns_ =
      SparseMatrix::from_triplets(n, static_cast<Index>(dofs_.size()), eliminated);
}

void DirichletConstraint::apply(std::span<double> rhs, std::span<const double> values) const {
  if (!values.empty()) {
    if (values.size() != dofs_.size()) throw InvalidInput("Dirichlet values size mismatch");
    eliminated_columns_.multiply_add(-1.0, values, rhs);
    for (std::size_t k = 0; k < dofs_.size(); ++k) rhs[dofs_[k]] = values[k];
  } else {
    for (Index d : dofs_) rhs[d] = 0.0;
  }
}

void apply_dirichlet(SparseMatrix& matrix, std::vector<double>& rhs, std::span<const Index> dofs) {
  const DirichletConstraint c(matrix, std::vector<Index>(dofs.begin(), dofs.end()));
  c.apply(rhs);
  matrix = c.matrix();
}

}  // namespace thermoporo
