#pragma once

#include <span>
#include <vector>

#include "emin/dense.hpp"

namespace emin {

// Permutation matrix Y with Y(i, forward[i]) = 1, so (Y x)_i = x[forward[i]].
class Permutation {
public:
  Permutation() = default;
  // Throws ConstructionError unless forward is a bijection on 0..size-1.
  explicit Permutation(std::vector<Index> forward);

  static Permutation identity(Index n);

  Index size() const noexcept { return forward_.size(); }
  const std::vector<Index>& forward() const noexcept { return forward_; }
  Index operator[](Index i) const noexcept { return forward_[i]; }

  Permutation inverse() const;
  Vector apply(std::span<const double> x) const;          // Y x
  Vector apply_transpose(std::span<const double> x) const;  // Y^T x
  DenseMatrix conjugate(const DenseMatrix& a) const;       // Y a Y^T
  DenseMatrix to_dense() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

private:
  std::vector<Index> forward_;
};

// The perfect shuffle Y mapping the row-major vectorization of an
// nf x nc matrix onto its column-major vectorization:
//   Y vec_row(W) = vec_col(W),  Y (P (x) Q) Y^T = Q (x) P.
Permutation perfect_shuffle(Index nf, Index nc);

// Column-major (i + j*nrows) and row-major (j + i*ncols) vectorizations.
Vector vec_col(const DenseMatrix& w);
Vector vec_row(const DenseMatrix& w);

} // namespace emin
