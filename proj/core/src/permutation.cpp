#include "emin/permutation.hpp"

#include <numeric>

#include "emin/error.hpp"

namespace emin {

Permutation::Permutation(std::vector<Index> forward) : forward_(std::move(forward)) {
  std::vector<bool> seen(forward_.size(), false);
  for (Index f : forward_) {
    if (f >= forward_.size() || seen[f])
      throw ConstructionError("Permutation: forward map is not a bijection");
    seen[f] = true;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> f(n);
  std::iota(f.begin(), f.end(), Index{0});
  return Permutation(std::move(f));
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(size());
  for (Index i = 0; i < size(); ++i) inv[forward_[i]] = i;
  return Permutation(std::move(inv));
}

Vector Permutation::apply(std::span<const double> x) const {
  if (x.size() != size()) throw DimensionError("Permutation::apply: length mismatch");
  Vector y(size());
  for (Index i = 0; i < size(); ++i) y[i] = x[forward_[i]];
  return y;
}

Vector Permutation::apply_transpose(std::span<const double> x) const {
  if (x.size() != size()) throw DimensionError("Permutation::apply_transpose: length mismatch");
  Vector y(size());
  for (Index i = 0; i < size(); ++i) y[forward_[i]] = x[i];
  return y;
}

DenseMatrix Permutation::conjugate(const DenseMatrix& a) const {
  if (a.nrows() != size() || a.ncols() != size())
    throw DimensionError("Permutation::conjugate: shape mismatch");
  DenseMatrix out(size(), size());
  for (Index i = 0; i < size(); ++i)
    for (Index j = 0; j < size(); ++j) out(i, j) = a(forward_[i], forward_[j]);
  return out;
}

DenseMatrix Permutation::to_dense() const {
  DenseMatrix y(size(), size());
  for (Index i = 0; i < size(); ++i) y(i, forward_[i]) = 1.0;
  return y;
}

Permutation perfect_shuffle(Index nf, Index nc) {
  // vec_col index i + j*nf holds W_ij, found at j + i*nc in vec_row.
  std::vector<Index> f(nf * nc);
  for (Index j = 0; j < nc; ++j)
    for (Index i = 0; i < nf; ++i) f[i + j * nf] = j + i * nc;
  return Permutation(std::move(f));
}

Vector vec_col(const DenseMatrix& w) {
  Vector v(w.nrows() * w.ncols());
  for (Index j = 0; j < w.ncols(); ++j)
    for (Index i = 0; i < w.nrows(); ++i) v[i + j * w.nrows()] = w(i, j);
  return v;
}

Vector vec_row(const DenseMatrix& w) { return w.values(); }

} // namespace emin
