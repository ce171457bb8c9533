#pragma once

#include <functional>
#include <span>
#include <vector>

#include "thermoporo/dofmap.hpp"
#include "thermoporo/model.hpp"
#include "thermoporo/sparse.hpp"

namespace thermoporo {

/// Quadrature exactness used for loads and error norms.
inline constexpr int kLoadExactness = 8;

/// Every constant-coefficient operator of the four-field system.
///
/// p and T share one space, so a single mass matrix serves M_p, M_T and the
/// p-T coupling, and a single rectangular matrix serves both xi couplings.
struct FormSet {
  SparseMatrix elasticity;  ///< 2 mu (eps(u), eps(v)), displacement x displacement
  SparseMatrix divergence;  ///< (div v, phi), rows: displacement, cols: xi
  SparseMatrix mass_xi;     ///< (xi, phi) on Q_h
  SparseMatrix mass_scalar; ///< (p, q) on W_h
  SparseMatrix mass_xi_scalar;  ///< (p, phi), rows: xi, cols: W_h
  SparseMatrix stiffness_p;     ///< (K grad p, grad q)
  SparseMatrix stiffness_T;     ///< (Theta grad T, grad S)
};

/// Bilinear forms use quadrature of exactness 2 * max degree.
FormSet assemble_forms(const TriMesh& mesh, const Spaces& spaces, const ModelParams& params);

/// Individual building blocks, exposed for tests.
SparseMatrix assemble_mass(const TriMesh& mesh, const DofMap& rows, const DofMap& cols);
SparseMatrix assemble_stiffness(const TriMesh& mesh, const DofMap& space, const SPD2& coefficient);
SparseMatrix assemble_elasticity(const TriMesh& mesh, const DofMap& space, double mu);
SparseMatrix assemble_divergence(const TriMesh& mesh, const DofMap& vector_space,
                                 const DofMap& scalar_space);

/// (f(., t), phi_i) for a scalar space.
std::vector<double> assemble_load(const TriMesh& mesh, const DofMap& space, const ScalarField& f,
                                  double t, int exactness = kLoadExactness);
/// (f(., t), v_i) for a vector space.
std::vector<double> assemble_load(const TriMesh& mesh, const DofMap& space, const VectorField& f,
                                  double t, int exactness = kLoadExactness);

/// Line integral of traction . v over edges carrying `tag`.
std::vector<double> assemble_neumann_traction(const TriMesh& mesh, const DofMap& space,
                                              const TractionField& traction, double t,
                                              BoundaryTag tag = BoundaryTag::GammaN,
                                              int points_per_edge = 6);

/// Symmetric elimination of Dirichlet dofs.
///
/// The constrained matrix has zeroed rows and columns with a unit diagonal.
/// The eliminated columns are kept so that non-homogeneous data can be
/// lifted into any right-hand side later.
class DirichletConstraint {
 public:
  DirichletConstraint() = default;
  DirichletConstraint(const SparseMatrix& matrix, std::vector<Index> dofs);

  [[nodiscard]] const SparseMatrix& matrix() const { return constrained_; }
  [[nodiscard]] const std::vector<Index>& dofs() const { return dofs_; }

  /// rhs_i -= sum_j A_ij g_j for free rows; rhs at constrained dofs = values.
  /// An empty `values` means homogeneous data.
  void apply(std::span<double> rhs, std::span<const double> values = {}) const;

 private:
  SparseMatrix constrained_;
  SparseMatrix eliminated_columns_;  ///< A(:, D) restricted to free rows, compressed to |D| columns
  std::vector<Index> dofs_;
};

/// Homogeneous elimination in place (the free-function form).
void apply_dirichlet(SparseMatrix& matrix, std::vector<double>& rhs, std::span<const Index> dofs);

}  // namespace thermoporo
