#pragma once

#include <span>
#include <vector>

#include "emin/dense.hpp"

namespace emin {

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed-row sparse matrix. Column indices are strictly increasing
// within each row; stored entries may be zero.
class SparseMatrix {
public:
  SparseMatrix() : row_offsets_(1, 0) {}
  // Validates the canonical-form invariants; throws ConstructionError.
  SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values);

  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const DenseMatrix& d, double drop_tol = 0.0);

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  Index nnz() const noexcept { return values_.size(); }

  const std::vector<Index>& row_offsets() const noexcept { return row_offsets_; }
  const std::vector<Index>& col_indices() const noexcept { return col_indices_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const noexcept {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_vals(Index i) const noexcept {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  // Stored value at (i, j), 0 if not stored. O(log row length).
  double at(Index i, Index j) const;
  Vector diagonal() const;
  DenseMatrix to_dense() const;
  SparseMatrix transposed() const;

private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_;
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

// Assembles a canonical CSR matrix; duplicates are summed.
SparseMatrix csr_from_triplets(std::span<const Triplet> triplets, Index nrows, Index ncols);

Vector spmv(const SparseMatrix& a, std::span<const double> x);
// y = a x without allocating.
void spmv_into(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
// r = b - a x
Vector residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
// alpha a + beta b
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                 double beta = 1.0);

// Rows `rows` and columns `cols` of a, renumbered in the given order.
SparseMatrix submatrix(const SparseMatrix& a, std::span<const Index> rows,
                       std::span<const Index> cols);

// Copy of a without entries whose magnitude is <= tol (exact zeros by default).
SparseMatrix drop_small(const SparseMatrix& a, double tol = 0.0);

bool is_symmetric(const SparseMatrix& a, double rel_tol = 1e-12);
double frobenius_norm(const SparseMatrix& a);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
// <a x, x>^{1/2}
double energy_norm(const SparseMatrix& a, std::span<const double> x);

// Largest eigenvalue estimate of symmetric a by power iteration.
double power_spectral_norm(const SparseMatrix& a, int iters = 50, double rel_tol = 1e-6);

} // namespace emin
