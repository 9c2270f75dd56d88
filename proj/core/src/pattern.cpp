#include "emin/pattern.hpp"

#include <algorithm>
#include <cmath>

#include "emin/error.hpp"

namespace emin {

SparsityPattern::SparsityPattern(Index nrows, Index ncols, std::vector<std::vector<Index>> rows,
                                 Index degree)
    : nrows_(nrows), ncols_(ncols), degree_(degree), row_offsets_{0} {
  if (rows.size() != nrows) throw ConstructionError("SparsityPattern: row count mismatch");
  row_offsets_.reserve(nrows + 1);
  for (Index i = 0; i < nrows; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    if (!r.empty() && r.back() >= ncols)
      throw ConstructionError("SparsityPattern: column index out of range");
    if (r.empty()) empty_rows_.push_back(i);
    col_indices_.insert(col_indices_.end(), r.begin(), r.end());
    row_offsets_.push_back(col_indices_.size());
  }
}

SparsityPattern SparsityPattern::full(Index nrows, Index ncols) {
  std::vector<std::vector<Index>> rows(nrows);
  for (auto& r : rows) {
    r.resize(ncols);
    for (Index j = 0; j < ncols; ++j) r[j] = j;
  }
  return SparsityPattern(nrows, ncols, std::move(rows));
}

SparsityPattern SparsityPattern::from_pairs(Index nrows, Index ncols,
                                            std::span<const std::pair<Index, Index>> pairs) {
  std::vector<std::vector<Index>> rows(nrows);
  for (auto [i, j] : pairs) {
    if (i >= nrows) throw ConstructionError("SparsityPattern: row index out of range");
    rows[i].push_back(j);
  }
  return SparsityPattern(nrows, ncols, std::move(rows));
}

Index SparsityPattern::position(Index i, Index j) const {
  auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), j);
  if (it == r.end() || *it != j) return size();
  return row_offsets_[i] + static_cast<Index>(it - r.begin());
}

bool SparsityPattern::contains(Index i, Index j) const { return position(i, j) != size(); }

bool SparsityPattern::subset_of(const SparsityPattern& other) const {
  if (nrows_ != other.nrows_ || ncols_ != other.ncols_) return false;
  for (Index i = 0; i < nrows_; ++i) {
    auto a = row(i);
    auto b = other.row(i);
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

PatternMatrix::PatternMatrix(PatternPtr pattern)
    : pattern_(std::move(pattern)), values_(pattern_->size(), 0.0) {}

PatternMatrix::PatternMatrix(PatternPtr pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (values_.size() != pattern_->size())
    throw ConstructionError("PatternMatrix: value count does not match pattern");
}

PatternMatrix PatternMatrix::restrict_dense(PatternPtr pattern, const DenseMatrix& d) {
  if (d.nrows() != pattern->nrows() || d.ncols() != pattern->ncols())
    throw DimensionError("PatternMatrix::restrict_dense: shape mismatch");
  PatternMatrix w(std::move(pattern));
  const auto& p = w.pattern();
  for (Index i = 0; i < p.nrows(); ++i) {
    auto cols = p.row(i);
    auto vals = w.row_values(i);
    for (Index k = 0; k < cols.size(); ++k) vals[k] = d(i, cols[k]);
  }
  return w;
}

double PatternMatrix::at(Index i, Index j) const {
  const Index pos = pattern_->position(i, j);
  return pos == pattern_->size() ? 0.0 : values_[pos];
}

DenseMatrix PatternMatrix::to_dense() const {
  DenseMatrix d(nrows(), ncols());
  for (Index i = 0; i < nrows(); ++i) {
    auto cols = pattern_->row(i);
    auto vals = row_values(i);
    for (Index k = 0; k < cols.size(); ++k) d(i, cols[k]) = vals[k];
  }
  return d;
}

SparseMatrix PatternMatrix::to_sparse() const {
  return SparseMatrix(nrows(), ncols(), pattern_->row_offsets(), pattern_->col_indices(),
                      values_);
}

double pattern_inner(const PatternMatrix& w, const PatternMatrix& z) {
  if (w.nrows() != z.nrows() || w.ncols() != z.ncols())
    throw DimensionError("pattern_inner: shape mismatch");
  double s = 0.0;
  if (w.same_pattern(z)) {
    auto a = w.values();
    auto b = z.values();
    for (Index k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  }
  // Entries outside either pattern are zero, so only the intersection counts.
  for (Index i = 0; i < w.nrows(); ++i) {
    auto wc = w.pattern().row(i);
    auto zc = z.pattern().row(i);
    auto wv = w.row_values(i);
    auto zv = z.row_values(i);
    Index p = 0, q = 0;
    while (p < wc.size() && q < zc.size()) {
      if (wc[p] < zc[q]) {
        ++p;
      } else if (zc[q] < wc[p]) {
        ++q;
      } else {
        s += wv[p++] * zv[q++];
      }
    }
  }
  return s;
}

double frobenius_norm(const PatternMatrix& w) { return std::sqrt(pattern_inner(w, w)); }

void axpy(double alpha, const PatternMatrix& x, PatternMatrix& y) {
  if (!x.same_pattern(y)) throw DimensionError("axpy: pattern mismatch");
  auto xv = x.values();
  auto yv = y.values();
  for (Index k = 0; k < xv.size(); ++k) yv[k] += alpha * xv[k];
}

PatternMatrix hadamard(const PatternMatrix& a, const PatternMatrix& b) {
  if (!a.same_pattern(b)) throw DimensionError("hadamard: pattern mismatch");
  PatternMatrix c(a.pattern_ptr());
  auto av = a.values();
  auto bv = b.values();
  auto cv = c.values();
  for (Index k = 0; k < av.size(); ++k) cv[k] = av[k] * bv[k];
  return c;
}

} // namespace emin
