#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "emin/dense.hpp"
#include "emin/sparse.hpp"

namespace emin {

// Fixed nf x nc index set N for interpolation weights, stored row-wise
// (rows are F-points, columns are C-points, both in local numbering).
class SparsityPattern {
public:
  SparsityPattern() : row_offsets_(1, 0) {}
  // Each row's column list is sorted and deduplicated on construction.
  SparsityPattern(Index nrows, Index ncols, std::vector<std::vector<Index>> rows,
                  Index degree = 0);
  static SparsityPattern full(Index nrows, Index ncols);
  static SparsityPattern from_pairs(Index nrows, Index ncols,
                                    std::span<const std::pair<Index, Index>> pairs);

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  Index size() const noexcept { return col_indices_.size(); }
  Index degree() const noexcept { return degree_; }

  const std::vector<Index>& row_offsets() const noexcept { return row_offsets_; }
  const std::vector<Index>& col_indices() const noexcept { return col_indices_; }
  std::span<const Index> row(Index i) const noexcept {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  bool contains(Index i, Index j) const;
  // Storage position of (i, j), or size() when absent.
  Index position(Index i, Index j) const;

  // Rows with no admissible column.
  const std::vector<Index>& empty_rows() const noexcept { return empty_rows_; }
  bool subset_of(const SparsityPattern& other) const;

  friend bool operator==(const SparsityPattern& a, const SparsityPattern& b) {
    return a.nrows_ == b.nrows_ && a.ncols_ == b.ncols_ && a.row_offsets_ == b.row_offsets_ &&
           a.col_indices_ == b.col_indices_;
  }

private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  Index degree_ = 0;
  std::vector<Index> row_offsets_;
  std::vector<Index> col_indices_;
  std::vector<Index> empty_rows_;
};

using PatternPtr = std::shared_ptr<const SparsityPattern>;

// A matrix whose nonzeros are confined to a fixed SparsityPattern. The
// pattern is shared between iterates so arithmetic is plain vector work.
class PatternMatrix {
public:
  PatternMatrix() = default;
  explicit PatternMatrix(PatternPtr pattern);
  PatternMatrix(PatternPtr pattern, std::vector<double> values);

  // Restriction of a dense matrix to the pattern.
  static PatternMatrix restrict_dense(PatternPtr pattern, const DenseMatrix& d);

  const SparsityPattern& pattern() const noexcept { return *pattern_; }
  const PatternPtr& pattern_ptr() const noexcept { return pattern_; }
  Index nrows() const noexcept { return pattern_->nrows(); }
  Index ncols() const noexcept { return pattern_->ncols(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> row_values(Index i) noexcept {
    const auto& off = pattern_->row_offsets();
    return {values_.data() + off[i], off[i + 1] - off[i]};
  }
  std::span<const double> row_values(Index i) const noexcept {
    const auto& off = pattern_->row_offsets();
    return {values_.data() + off[i], off[i + 1] - off[i]};
  }
  // Value at (i, j); zero outside the pattern.
  double at(Index i, Index j) const;

  bool same_pattern(const PatternMatrix& other) const noexcept {
    return pattern_ == other.pattern_ || *pattern_ == *other.pattern_;
  }

  DenseMatrix to_dense() const;
  SparseMatrix to_sparse() const;

private:
  PatternPtr pattern_;
  std::vector<double> values_;
};

// Frobenius inner product sum_ij W_ij Z_ij over the union of stored entries.
double pattern_inner(const PatternMatrix& w, const PatternMatrix& z);
double frobenius_norm(const PatternMatrix& w);

// y += alpha x (same pattern).
void axpy(double alpha, const PatternMatrix& x, PatternMatrix& y);
// Entry-wise product (same pattern).
PatternMatrix hadamard(const PatternMatrix& a, const PatternMatrix& b);

} // namespace emin
