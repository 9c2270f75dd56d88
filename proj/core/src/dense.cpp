#include "emin/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emin/error.hpp"

namespace emin {

DenseMatrix::DenseMatrix(Index nrows, Index ncols, double fill)
    : nrows_(nrows), ncols_(ncols), values_(nrows * ncols, fill) {}

DenseMatrix::DenseMatrix(Index nrows, Index ncols, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), values_(std::move(values)) {
  if (values_.size() != nrows_ * ncols_) {
    throw DimensionError("DenseMatrix: value count does not match shape");
  }
}

DenseMatrix DenseMatrix::identity(Index n) {
  DenseMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
  DenseMatrix m(d.size(), d.size());
  for (Index i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector DenseMatrix::column(Index j) const {
  Vector c(nrows_);
  for (Index i = 0; i < nrows_; ++i) c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(Index j, std::span<const double> v) {
  if (v.size() != nrows_) throw DimensionError("set_column: length mismatch");
  for (Index i = 0; i < nrows_; ++i) (*this)(i, j) = v[i];
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(ncols_, nrows_);
  for (Index i = 0; i < nrows_; ++i)
    for (Index j = 0; j < ncols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector DenseMatrix::diag() const {
  Vector d(std::min(nrows_, ncols_));
  for (Index i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
  return d;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (nrows_ != other.nrows_ || ncols_ != other.ncols_)
    throw DimensionError("DenseMatrix +=: shape mismatch");
  for (Index k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  if (nrows_ != other.nrows_ || ncols_ != other.ncols_)
    throw DimensionError("DenseMatrix -=: shape mismatch");
  for (Index k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.ncols() != b.nrows()) throw DimensionError("DenseMatrix product: shape mismatch");
  DenseMatrix c(a.nrows(), b.ncols());
  for (Index i = 0; i < a.nrows(); ++i) {
    auto crow = c.row(i);
    for (Index k = 0; k < a.ncols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (Index j = 0; j < b.ncols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
  if (a.ncols() != x.size()) throw DimensionError("DenseMatrix matvec: length mismatch");
  Vector y(a.nrows(), 0.0);
  for (Index i = 0; i < a.nrows(); ++i) {
    auto r = a.row(i);
    double s = 0.0;
    for (Index j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix k(a.nrows() * b.nrows(), a.ncols() * b.ncols());
  for (Index i = 0; i < a.nrows(); ++i)
    for (Index j = 0; j < a.ncols(); ++j) {
      const double aij = a(i, j);
      for (Index p = 0; p < b.nrows(); ++p)
        for (Index q = 0; q < b.ncols(); ++q)
          k(i * b.nrows() + p, j * b.ncols() + q) = aij * b(p, q);
    }
  return k;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

double trace(const DenseMatrix& a) {
  double t = 0.0;
  for (Index i = 0; i < std::min(a.nrows(), a.ncols()); ++i) t += a(i, i);
  return t;
}

bool is_symmetric(const DenseMatrix& a, double rel_tol) {
  if (!a.square()) return false;
  const double scale = max_abs(a);
  for (Index i = 0; i < a.nrows(); ++i)
    for (Index j = i + 1; j < a.ncols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > rel_tol * scale) return false;
  return true;
}

DenseMatrix symmetrized(const DenseMatrix& a) {
  DenseMatrix s = a;
  for (Index i = 0; i < a.nrows(); ++i)
    for (Index j = i + 1; j < a.ncols(); ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      s(i, j) = m;
      s(j, i) = m;
    }
  return s;
}

DenseMatrix cholesky(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("cholesky: matrix not square");
  const Index n = a.nrows();
  DenseMatrix l(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      throw SingularMatrixError("cholesky: matrix is not positive definite");
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Vector cholesky_solve(const DenseMatrix& l, std::span<const double> b) {
  const Index n = l.nrows();
  if (b.size() != n) throw DimensionError("cholesky_solve: length mismatch");
  Vector y(b.begin(), b.end());
  for (Index i = 0; i < n; ++i) {
    double s = y[i];
    for (Index k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  for (Index ii = n; ii-- > 0;) {
    double s = y[ii];
    for (Index k = ii + 1; k < n; ++k) s -= l(k, ii) * y[k];
    y[ii] = s / l(ii, ii);
  }
  return y;
}

DenseMatrix cholesky_solve(const DenseMatrix& l, const DenseMatrix& b) {
  DenseMatrix x(b.nrows(), b.ncols());
  for (Index j = 0; j < b.ncols(); ++j) x.set_column(j, cholesky_solve(l, b.column(j)));
  return x;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
  if (!lu_.square()) throw DimensionError("LU: matrix not square");
  const Index n = lu_.nrows();
  pivots_.resize(n);
  const double scale = std::max(max_abs(lu_), 1e-300);
  for (Index k = 0; k < n; ++k) {
    Index p = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    pivots_[k] = p;
    if (std::abs(lu_(p, k)) <= 1e-14 * scale)
      throw SingularMatrixError("LU: matrix is singular to working precision");
    if (p != k)
      for (Index j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
    const double pivot = lu_(k, k);
    for (Index i = k + 1; i < n; ++i) {
      const double f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      if (f == 0.0) continue;
      for (Index j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Vector LuFactorization::solve(std::span<const double> b) const {
  const Index n = lu_.nrows();
  if (b.size() != n) throw DimensionError("LU solve: length mismatch");
  Vector x(b.begin(), b.end());
  for (Index k = 0; k < n; ++k) std::swap(x[k], x[pivots_[k]]);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < i; ++k) x[i] -= lu_(i, k) * x[k];
  for (Index ii = n; ii-- > 0;) {
    for (Index k = ii + 1; k < n; ++k) x[ii] -= lu_(ii, k) * x[k];
    x[ii] /= lu_(ii, ii);
  }
  return x;
}

DenseMatrix LuFactorization::solve(const DenseMatrix& b) const {
  DenseMatrix x(b.nrows(), b.ncols());
  for (Index j = 0; j < b.ncols(); ++j) x.set_column(j, solve(b.column(j)));
  return x;
}

DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b) {
  return LuFactorization(a).solve(b);
}

Vector solve(const DenseMatrix& a, std::span<const double> b) {
  return LuFactorization(a).solve(b);
}

DenseMatrix inverse(const DenseMatrix& a) {
  return LuFactorization(a).solve(DenseMatrix::identity(a.nrows()));
}

namespace {

// Cyclic Jacobi on a symmetric matrix; a is overwritten with its
// (nearly) diagonal form, v accumulates the rotations.
void jacobi_rotate_all(DenseMatrix& a, DenseMatrix& v) {
  const Index n = a.nrows();
  constexpr int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const double x = a(i, j) * a(i, j);
        total += x;
        if (i != j) off += x;
      }
    if (off <= 1e-32 * total || off == 0.0) return;

    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

SymmetricEigen jacobi_eig(DenseMatrix a) {
  const Index n = a.nrows();
  DenseMatrix v = DenseMatrix::identity(n);
  jacobi_rotate_all(a, v);

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return a(x, x) < a(y, y); });

  SymmetricEigen out{Vector(n), DenseMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (Index i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

} // namespace

SymmetricEigen dense_sym_eig(const DenseMatrix& a, const std::optional<DenseMatrix>& b) {
  if (!a.square()) throw DimensionError("dense_sym_eig: matrix not square");
  if (!is_symmetric(a)) throw NotSymmetricError("dense_sym_eig: matrix is not symmetric");
  if (!b) return jacobi_eig(symmetrized(a));

  if (b->nrows() != a.nrows() || !b->square())
    throw DimensionError("dense_sym_eig: B shape does not match A");
  if (!is_symmetric(*b)) throw NotSymmetricError("dense_sym_eig: B is not symmetric");

  const Index n = a.nrows();
  const DenseMatrix l = cholesky(symmetrized(*b));

  // c = L^{-1} a L^{-T}
  DenseMatrix y(n, n);  // y = L^{-1} a
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      double s = a(i, j);
      for (Index k = 0; k < i; ++k) s -= l(i, k) * y(k, j);
      y(i, j) = s / l(i, i);
    }
  }
  DenseMatrix c(n, n);  // c^T = L^{-1} y^T, c symmetric
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      double s = y(j, i);
      for (Index k = 0; k < i; ++k) s -= l(i, k) * c(k, j);
      c(i, j) = s / l(i, i);
    }
  }
  SymmetricEigen e = jacobi_eig(symmetrized(c));

  // v = L^{-T} u
  DenseMatrix v(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index ii = n; ii-- > 0;) {
      double s = e.vectors(ii, j);
      for (Index k = ii + 1; k < n; ++k) s -= l(k, ii) * v(k, j);
      v(ii, j) = s / l(ii, ii);
    }
  }
  e.vectors = std::move(v);
  return e;
}

DenseMatrix sym_matrix_function(const DenseMatrix& a, double (*f)(double)) {
  const SymmetricEigen e = dense_sym_eig(a);
  const Index n = a.nrows();
  DenseMatrix out(n, n);
  for (Index k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    for (Index i = 0; i < n; ++i) {
      const double vik = e.vectors(i, k) * fk;
      if (vik == 0.0) continue;
      for (Index j = 0; j < n; ++j) out(i, j) += vik * e.vectors(j, k);
    }
  }
  return symmetrized(out);
}

double spectral_norm_sym(const DenseMatrix& a) {
  const SymmetricEigen e = dense_sym_eig(a);
  double m = 0.0;
  for (double v : e.values) m = std::max(m, std::abs(v));
  return m;
}

} // namespace emin
