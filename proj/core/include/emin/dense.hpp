#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace emin {

using Index = std::size_t;
using Vector = std::vector<double>;

// Row-major dense matrix for desk-scale (n <= ~500) work.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(Index nrows, Index ncols, double fill = 0.0);
  DenseMatrix(Index nrows, Index ncols, std::vector<double> values);

  static DenseMatrix identity(Index n);
  static DenseMatrix diagonal(std::span<const double> d);

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  bool square() const noexcept { return nrows_ == ncols_; }

  double& operator()(Index i, Index j) noexcept { return values_[i * ncols_ + j]; }
  double operator()(Index i, Index j) const noexcept { return values_[i * ncols_ + j]; }

  std::span<double> row(Index i) noexcept { return {values_.data() + i * ncols_, ncols_}; }
  std::span<const double> row(Index i) const noexcept {
    return {values_.data() + i * ncols_, ncols_};
  }
  Vector column(Index j) const;
  void set_column(Index j, std::span<const double> v);

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  DenseMatrix transposed() const;
  Vector diag() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double s);

private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<double> values_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

// Kronecker product a (x) b.
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
double trace(const DenseMatrix& a);

// max_ij |a_ij - a_ji| <= rel_tol * max|a_ij|.
bool is_symmetric(const DenseMatrix& a, double rel_tol = 1e-12);
DenseMatrix symmetrized(const DenseMatrix& a);

// Lower Cholesky factor; throws SingularMatrixError unless a is SPD.
DenseMatrix cholesky(const DenseMatrix& a);
// Solves L L^T X = B for X given the Cholesky factor L.
DenseMatrix cholesky_solve(const DenseMatrix& l, const DenseMatrix& b);
Vector cholesky_solve(const DenseMatrix& l, std::span<const double> b);

// LU with partial pivoting. Throws SingularMatrixError on a zero pivot.
class LuFactorization {
public:
  explicit LuFactorization(DenseMatrix a);
  DenseMatrix solve(const DenseMatrix& b) const;
  Vector solve(std::span<const double> b) const;
  Index size() const noexcept { return lu_.nrows(); }

private:
  DenseMatrix lu_;
  std::vector<Index> pivots_;
};

DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b);
Vector solve(const DenseMatrix& a, std::span<const double> b);
DenseMatrix inverse(const DenseMatrix& a);

struct SymmetricEigen {
  Vector values;        // ascending
  DenseMatrix vectors;  // column k pairs with values[k]
};

// Symmetric (generalized when b is given) eigen-decomposition:
// a v = lambda b v, eigenvectors b-orthonormal, eigenvalues ascending.
// Cyclic Jacobi on a, or on L^{-1} a L^{-T} after Cholesky of b.
SymmetricEigen dense_sym_eig(const DenseMatrix& a,
                             const std::optional<DenseMatrix>& b = std::nullopt);

// f(a) for symmetric a via its eigen-decomposition (e.g. a^{1/2}).
DenseMatrix sym_matrix_function(const DenseMatrix& a, double (*f)(double));

// Largest eigenvalue of a symmetric matrix.
double spectral_norm_sym(const DenseMatrix& a);

} // namespace emin
