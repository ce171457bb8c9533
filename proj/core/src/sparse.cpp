#include "thermoporo/sparse.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>

namespace thermoporo {

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
                           std::vector<Index> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != static_cast<std::size_t>(rows_) + 1 ||
      col_indices_.size() != values_.size() ||
      static_cast<std::size_t>(row_offsets_.back()) != values_.size()) {
    throw InvalidInput("SparseMatrix: inconsistent CSR arrays");
  }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         std::span<const Triplet> entries) {
  if (rows < 0 || cols < 0) throw InvalidInput("from_triplets: negative dimensions");
  std::vector<Index> count(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidInput("from_triplets: entry (" + std::to_string(t.row) + ", " +
                         std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
    ++count[static_cast<std::size_t>(t.row) + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());

  // Bucket by row (stable, so summation order follows input order).
  std::vector<std::pair<Index, double>> bucket(entries.size());
  std::vector<Index> fill(count.begin(), count.end() - 1);
  for (const auto& t : entries) bucket[fill[t.row]++] = {t.col, t.value};

  std::vector<Index> offsets{0};
  offsets.reserve(static_cast<std::size_t>(rows) + 1);
  std::vector<Index> cols_out;
  std::vector<double> vals_out;
  cols_out.reserve(entries.size());
  vals_out.reserve(entries.size());
  for (Index r = 0; r < rows; ++r) {
    auto first = bucket.begin() + count[r];
    auto last = bucket.begin() + count[r + 1];
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!cols_out.empty() && static_cast<Index>(cols_out.size()) > offsets.back() &&
          cols_out.back() == it->first) {
        vals_out.back() += it->second;
      } else {
        cols_out.push_back(it->first);
        vals_out.push_back(it->second);
      }
    }
    offsets.push_back(static_cast<Index>(cols_out.size()));
  }
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals_out));
}

double SparseMatrix::at(Index row, Index col) const {
  const auto first = col_indices_.begin() + row_offsets_[row];
  const auto last = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  return (it != last && *it == col) ? values_[static_cast<std::size_t>(it - col_indices_.begin())]
                                    : 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  multiply_add(1.0, x, y);
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
  multiply_add(1.0, x, y);
  return y;
}

void SparseMatrix::multiply_add(double scale, std::span<const double> x,
                                std::span<double> y) const {
  for (Index r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      sum += values_[k] * x[col_indices_[k]];
    }
    y[r] += scale * sum;
  }
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  append_triplets(t, 0, 0, 1.0, true);
  return from_triplets(cols_, rows_, t);
}

double SparseMatrix::asymmetry() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Index r = 0; r < rows_; ++r) {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values_[k] - at(col_indices_[k], r)));
    }
  }
  return worst;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> dense(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (Index r = 0; r < rows_; ++r) {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      dense[static_cast<std::size_t>(r) * cols_ + col_indices_[k]] = values_[k];
    }
  }
  return dense;
}

void SparseMatrix::append_triplets(std::vector<Triplet>& out, Index row_offset,
                                   Index col_offset, double scale, bool transposed) const {
  if (scale == 0.0) return;
  out.reserve(out.size() + values_.size());
  for (Index r = 0; r < rows_; ++r) {
    for (Index k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      const Index c = col_indices_[k];
      if (transposed) {
        out.push_back({row_offset + c, col_offset + r, scale * values_[k]});
      } else {
        out.push_back({row_offset + r, col_offset + c, scale * values_[k]});
      }
    }
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

KrylovReport gmres(const LinearOperator& a, const LinearOperator& preconditioner,
                   std::span<const double> b, std::span<double> x, double tolerance,
                   int max_iterations, int restart) {
  if (restart < 1 || max_iterations < 0) throw InvalidInput("gmres: invalid iteration limits");
  const std::size_t n = b.size();
  if (x.size() != n) throw InvalidInput("gmres: size mismatch");
  KrylovReport report;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return report;
  }

  const auto m = static_cast<std::size_t>(restart);
  std::vector<double> r(n);
  std::vector<double> w(n);
  std::vector<double> z(n);
  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m), sn(m), g(m + 1), y(m);

  const auto residual = [&]() {
    a(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r);
  };

  double rnorm = residual();
  while (true) {
    report.relative_residual = rnorm / bnorm;
    if (report.relative_residual <= tolerance) {
      report.converged = true;
      return report;
    }
    if (report.iterations >= max_iterations) return report;

    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;
    std::size_t j = 0;
    for (; j < m && report.iterations < max_iterations; ++j) {
      ++report.iterations;
      preconditioner(v[j], z);
      a(z, w);
      for (std::size_t i = 0; i <= j; ++i) {
        double dot = 0.0;
        for (std::size_t q = 0; q < n; ++q) dot += w[q] * v[i][q];
        h[i][j] = dot;
        for (std::size_t q = 0; q < n; ++q) w[q] -= dot * v[i][q];
      }
      h[j + 1][j] = norm2(w);
      if (h[j + 1][j] > 0.0) {
        for (std::size_t q = 0; q < n; ++q) v[j + 1][q] = w[q] / h[j + 1][j];
      }
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double d = std::hypot(h[j][j], h[j + 1][j]);
      cs[j] = d > 0.0 ? h[j][j] / d : 1.0;
      sn[j] = d > 0.0 ? h[j + 1][j] / d : 0.0;
      h[j][j] = d;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) <= 0.1 * tolerance * bnorm || h[j][j] == 0.0) {
        ++j;
        break;
      }
    }

    for (std::size_t i = j; i-- > 0;) {
      double s = g[i];
      for (std::size_t k = i + 1; k < j; ++k) s -= h[i][k] * y[k];
      y[i] = h[i][i] != 0.0 ? s / h[i][i] : 0.0;
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t i = 0; i < j; ++i) {
      for (std::size_t q = 0; q < n; ++q) w[q] += y[i] * v[i][q];
    }
    preconditioner(w, z);
    for (std::size_t q = 0; q < n; ++q) x[q] += z[q];
    const double previous = rnorm;
    rnorm = residual();
    if (!(rnorm < previous)) {
      report.relative_residual = rnorm / bnorm;
      report.converged = report.relative_residual <= tolerance;
      return report;
    }
  }
}

namespace {

using EigenMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using LU = Eigen::SparseLU<EigenMatrix, Eigen::COLAMDOrdering<int>>;
using LDLT = Eigen::SimplicialLDLT<EigenMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;
using LLT = Eigen::SimplicialLLT<EigenMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

EigenMatrix to_eigen(const SparseMatrix& a) {
  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(a.nonzeros());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index k = a.row_offsets()[r]; k < a.row_offsets()[r + 1]; ++k) {
      t.emplace_back(r, a.col_indices()[k], a.values()[k]);
    }
  }
  EigenMatrix m(a.rows(), a.cols());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

struct Factorization::Impl {
  std::string name;
  SparseMatrix matrix;
  MatrixStructure structure;
  std::variant<std::unique_ptr<LU>, std::unique_ptr<LDLT>, std::unique_ptr<LLT>> solver;

  Eigen::VectorXd raw_solve(const Eigen::VectorXd& b) const {
    return std::visit([&](const auto& s) -> Eigen::VectorXd { return s->solve(b); }, solver);
  }
};

Factorization::Factorization(const SparseMatrix& matrix, MatrixStructure structure,
                             std::string name)
    : impl_(std::make_unique<Impl>()) {
  impl_->name = std::move(name);
  impl_->matrix = matrix;
  impl_->structure = structure;
  if (matrix.rows() != matrix.cols()) {
    throw InvalidInput(impl_->name + ": matrix is not square");
  }
  const EigenMatrix m = to_eigen(matrix);
  const auto fail = [&](const std::string& why) {
    throw NumericalFailure(impl_->name + ": factorization failed (" + why + ")");
  };
  switch (structure) {
    case MatrixStructure::General: {
      auto lu = std::make_unique<LU>();
      lu->analyzePattern(m);
      lu->factorize(m);
      if (lu->info() != Eigen::Success) fail(lu->lastErrorMessage());
      impl_->solver = std::move(lu);
      break;
    }
    case MatrixStructure::SymmetricIndefinite: {
      auto ldlt = std::make_unique<LDLT>();
      ldlt->compute(m);
      if (ldlt->info() != Eigen::Success) fail("zero pivot");
      const auto& d = ldlt->vectorD();
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0 || !std::isfinite(d[i])) fail("singular to working precision");
      }
      impl_->solver = std::move(ldlt);
      break;
    }
    case MatrixStructure::SymmetricPositiveDefinite: {
      auto llt = std::make_unique<LLT>();
      llt->compute(m);
      if (llt->info() != Eigen::Success) fail("matrix is not positive definite");
      impl_->solver = std::move(llt);
      break;
    }
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

const std::string& Factorization::name() const { return impl_->name; }
Index Factorization::size() const { return impl_->matrix.rows(); }

bool Factorization::positive_pivots() const {
  if (std::holds_alternative<std::unique_ptr<LLT>>(impl_->solver)) return true;
  if (const auto* ldlt = std::get_if<std::unique_ptr<LDLT>>(&impl_->solver)) {
    return ((*ldlt)->vectorD().array() > 0.0).all();
  }
  return false;
}

std::vector<double> Factorization::solve(std::span<const double> rhs,
                                         LinearSolveReport* report) const {
  const Index n = size();
  if (static_cast<Index>(rhs.size()) != n) {
    throw InvalidInput(impl_->name + ": right-hand side has wrong length");
  }
  const double bnorm = norm2(rhs);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  LinearSolveReport local{impl_->name, 0.0, 0};
  if (bnorm > 0.0) {
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
    Eigen::VectorXd sol = impl_->raw_solve(b);
    std::vector<double> r(static_cast<std::size_t>(n));
    const auto residual = [&] {
      std::copy(sol.data(), sol.data() + n, x.begin());
      impl_->matrix.multiply(x, r);
      for (Index i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
      return norm2(r) / bnorm;
    };
    double rel = residual();
    constexpr int kMaxRefinement = 3;
    while (!(rel <= kResidualTolerance) && local.refinement_steps < kMaxRefinement &&
           std::isfinite(rel)) {
      sol += impl_->raw_solve(Eigen::Map<const Eigen::VectorXd>(r.data(), n));
      ++local.refinement_steps;
      rel = residual();
    }
    local.relative_residual = rel;
    if (!(rel <= kResidualTolerance)) {
      throw NumericalFailure(impl_->name + ": relative residual " + std::to_string(rel) +
                             " above tolerance");
    }
  }
  if (report) *report = local;
  return x;
}

std::pair<std::vector<double>, LinearSolveReport> solve(const SparseMatrix& a,
                                                        std::span<const double> b,
                                                        std::string name) {
  const Factorization f(a, MatrixStructure::General, std::move(name));
  LinearSolveReport report;
  auto x = f.solve(b, &report);
  return {std::move(x), report};
}

}  // namespace thermoporo
