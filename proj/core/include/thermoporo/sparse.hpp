#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thermoporo/common.hpp"

namespace thermoporo {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values);

  /// Duplicates are summed. Throws InvalidInput on out-of-range indices.
  static SparseMatrix from_triplets(Index rows, Index cols, std::span<const Triplet> entries);

  [[nodiscard]] Index rows() const { return rows_; }
  [[nodiscard]] Index cols() const { return cols_; }
  [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
  [[nodiscard]] const std::vector<Index>& row_offsets() const { return row_offsets_; }
  [[nodiscard]] const std::vector<Index>& col_indices() const { return col_indices_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::vector<double>& values() { return values_; }

  /// Stored value or 0.
  [[nodiscard]] double at(Index row, Index col) const;

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
  /// y += scale * A x
  void multiply_add(double scale, std::span<const double> x, std::span<double> y) const;

  [[nodiscard]] SparseMatrix transpose() const;
  /// Largest |A_ij - A_ji| over the stored pattern of both.
  [[nodiscard]] double asymmetry() const;
  /// Row-major dense copy (tests and small diagnostics only).
  [[nodiscard]] std::vector<double> to_dense() const;

  /// Appends scale * this, shifted by (row_offset, col_offset), to a triplet list.
  void append_triplets(std::vector<Triplet>& out, Index row_offset, Index col_offset,
                       double scale = 1.0, bool transposed = false) const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

enum class MatrixStructure {
  General,              ///< LU with partial pivoting
  SymmetricIndefinite,  ///< LDL^T; valid for symmetric quasi-definite systems
  SymmetricPositiveDefinite,  ///< Cholesky
};

struct LinearSolveReport {
  std::string system;
  double relative_residual = 0.0;
  int refinement_steps = 0;
};

/// Factorization of a square sparse matrix, computed once and reused.
///
/// Ordering is a fixed approximate-minimum-degree permutation, so results
/// are deterministic. solve() is const and may be called concurrently on
/// distinct factorizations. A failed factorization, or a solve whose
/// relative residual stays above the tolerance after iterative refinement,
/// throws NumericalFailure naming the system.
class Factorization {
 public:
  Factorization(const SparseMatrix& matrix, MatrixStructure structure, std::string name);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  [[nodiscard]] std::vector<double> solve(std::span<const double> rhs,
                                          LinearSolveReport* report = nullptr) const;

  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] Index size() const;
  /// Positive when every pivot of an SPD / LDL^T factorization is positive.
  [[nodiscard]] bool positive_pivots() const;

  static constexpr double kResidualTolerance = 1e-10;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot direct solve of a general square system.
std::pair<std::vector<double>, LinearSolveReport> solve(const SparseMatrix& a,
                                                        std::span<const double> b,
                                                        std::string name = "system");

double norm2(std::span<const double> v);

/// y = Op x
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct KrylovReport {
  int iterations = 0;
  double relative_residual = 0.0;  ///< true residual ||b - A x|| / ||b||
  bool converged = false;
};

/// Restarted GMRES with right preconditioning (A M^-1 w = b, x = M^-1 w).
/// `x` holds the initial guess on entry. Convergence is judged on the true
/// residual recomputed at the end of every cycle.
KrylovReport gmres(const LinearOperator& a, const LinearOperator& preconditioner,
                   std::span<const double> b, std::span<double> x, double tolerance,
                   int max_iterations, int restart = 40);

}  // namespace thermoporo
