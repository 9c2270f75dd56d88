#include "emin/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "emin/error.hpp"

namespace emin {

void Relaxation::validate() const {
  if (!(omega > 0.0)) throw ConfigError("relaxation: omega must be positive");
  if (sweeps < 1) throw ConfigError("relaxation: sweeps must be at least 1");
}

Vector SpectralEquivalence::x_diagonal(std::span<const double> a_diagonal) const {
  if (op == EquivalenceOperator::diagonal_of_a) return Vector(a_diagonal.begin(), a_diagonal.end());
  return Vector(a_diagonal.size(), scale);
}

void SpectralEquivalence::validate() const {
  if (!(c1 > 0.0 && c1 <= c2)) throw ConfigError("spectral equivalence: need 0 < c1 <= c2");
  if (op == EquivalenceOperator::scaled_identity && !(scale > 0.0))
    throw ConfigError("spectral equivalence: scale must be positive");
}

void relax_in_place(const Relaxation& rel, const SparseMatrix& a, std::span<double> x,
                    std::span<const double> b) {
  rel.validate();
  const Index n = a.nrows();
  if (a.ncols() != n || x.size() != n || b.size() != n)
    throw DimensionError("relax_sweep: dimension mismatch");
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  const Vector d = a.diagonal();
  for (Index i = 0; i < n; ++i)
    if (d[i] == 0.0) throw SingularMatrixError("relax_sweep: zero diagonal entry");

  if (rel.kind == RelaxationKind::jacobi) {
    Vector r(n);
    for (Index s = 0; s < rel.sweeps; ++s) {
      for (Index i = 0; i < n; ++i) {
        double ax = 0.0;
        for (Index k = off[i]; k < off[i + 1]; ++k) ax += vals[k] * x[cols[k]];
        r[i] = b[i] - ax;
      }
      for (Index i = 0; i < n; ++i) x[i] += rel.omega * r[i] / d[i];
    }
    return;
  }

  // Forward Gauss-Seidel with the lower triangle as M (omega scales the update).
  for (Index s = 0; s < rel.sweeps; ++s) {
    for (Index i = 0; i < n; ++i) {
      double sum = b[i];
      for (Index k = off[i]; k < off[i + 1]; ++k)
        if (cols[k] != i) sum -= vals[k] * x[cols[k]];
      const double gs = sum / d[i];
      x[i] += rel.omega * (gs - x[i]);
    }
  }
}

Vector relax_sweep(const Relaxation& rel, const SparseMatrix& a, std::span<const double> x,
                   std::span<const double> b) {
  Vector out(x.begin(), x.end());
  relax_in_place(rel, a, out, b);
  return out;
}

double jacobi_spectral_radius(const SparseMatrix& a, int iters) {
  const Index n = a.nrows();
  if (a.ncols() != n) throw DimensionError("jacobi_spectral_radius: matrix not square");
  Vector scale = a.diagonal();
  for (double& d : scale) {
    if (!(d > 0.0)) throw SingularMatrixError("jacobi_spectral_radius: nonpositive diagonal");
    d = 1.0 / std::sqrt(d);
  }
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.3 * static_cast<double>(i) + 0.7);
  double lambda = 0.0;
  Vector w(n);
  for (int it = 0; it < iters; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    for (Index i = 0; i < n; ++i) w[i] = v[i] * scale[i] / nv;
    Vector av = spmv(a, w);
    for (Index i = 0; i < n; ++i) av[i] *= scale[i];
    // Rayleigh quotient of the normalized iterate
    double rq = 0.0;
    for (Index i = 0; i < n; ++i) rq += av[i] * v[i] / nv;
    lambda = rq;
    v = std::move(av);
  }
  return lambda;
}

DenseMatrix relaxation_matrix(const Relaxation& rel, const DenseMatrix& a) {
  rel.validate();
  const Index n = a.nrows();
  DenseMatrix m(n, n);
  if (rel.kind == RelaxationKind::jacobi) {
    for (Index i = 0; i < n; ++i) m(i, i) = a(i, i) / rel.omega;
  } else {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < i; ++j) m(i, j) = a(i, j);
      m(i, i) = a(i, i) / rel.omega;
    }
  }
  return m;
}

DenseMatrix symmetrized_mtilde(const DenseMatrix& a, const DenseMatrix& m) {
  if (!a.square() || m.nrows() != a.nrows() || m.ncols() != a.ncols())
    throw DimensionError("symmetrized_mtilde: shape mismatch");
  const DenseMatrix mt = m.transposed();
  const DenseMatrix middle = m + mt - a;
  const DenseMatrix inner = solve(middle, m);  // (M + M^T - A)^{-1} M
  return symmetrized(mt * inner);
}

bool is_a_convergent(const DenseMatrix& a, const DenseMatrix& m) {
  const DenseMatrix middle = symmetrized(m + m.transposed() - a);
  const SymmetricEigen e = dense_sym_eig(middle);
  double norm_a = 0.0;
  const SymmetricEigen ea = dense_sym_eig(symmetrized(a));
  for (double v : ea.values) norm_a = std::max(norm_a, std::abs(v));
  return e.values.front() > 1e-12 * norm_a;
}

} // namespace emin
