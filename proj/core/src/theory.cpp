#include "emin/theory.hpp"

#include <algorithm>
#include <cmath>

#include "emin/error.hpp"

namespace emin {

namespace {

void check_square(const DenseMatrix& a, const char* what) {
  if (!a.square()) throw DimensionError(std::string(what) + ": matrix must be square");
}

void check_interp(const DenseMatrix& a, const DenseMatrix& p, const char* what) {
  if (p.nrows() != a.nrows()) throw DimensionError(std::string(what) + ": P row count mismatch");
  if (p.ncols() == 0 || p.ncols() > p.nrows())
    throw DimensionError(std::string(what) + ": P must have between 1 and n columns");
}

// P (P^T X P)^{-1} P^T X. Rank-deficient P makes P^T X P singular.
DenseMatrix x_projector(const DenseMatrix& x, const DenseMatrix& p) {
  const DenseMatrix pt = p.transposed();
  const DenseMatrix ptx = pt * x;
  DenseMatrix l;
  try {
    l = cholesky(symmetrized(ptx * p));
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("interpolation P is rank deficient");
  }
  return p * cholesky_solve(l, ptx);
}

// X - X P (P^T X P)^{-1} P^T X
DenseMatrix complement_form(const DenseMatrix& x, const DenseMatrix& p) {
  return symmetrized(x - x * x_projector(x, p));
}

double inv_sqrt(double v) { return 1.0 / std::sqrt(v); }
double sqrt_fn(double v) { return std::sqrt(v); }

// ||E||_A for E acting on vectors, via the A-similar matrix A^{1/2} E A^{-1/2}.
double a_norm(const DenseMatrix& a, const DenseMatrix& e) {
  const DenseMatrix half = sym_matrix_function(a, sqrt_fn);
  const DenseMatrix neg_half = sym_matrix_function(a, inv_sqrt);
  const DenseMatrix s = half * e * neg_half;
  const SymmetricEigen eig = dense_sym_eig(symmetrized(s.transposed() * s));
  return std::sqrt(std::max(0.0, eig.values.back()));
}

double lambda_max(const DenseMatrix& a, const DenseMatrix& b) {
  return dense_sym_eig(symmetrized(a), symmetrized(b)).values.back();
}

} // namespace

DenseMatrix two_grid_propagator(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p) {
  check_square(a, "two_grid_propagator");
  check_interp(a, p, "two_grid_propagator");
  const Index n = a.nrows();
  const DenseMatrix id = DenseMatrix::identity(n);
  const DenseMatrix pre = id - solve(m, a);
  const DenseMatrix post = id - solve(m.transposed(), a);
  const DenseMatrix coarse = id - x_projector(a, p);
  return post * coarse * pre;
}

double two_grid_error_norm(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p) {
  return a_norm(a, two_grid_propagator(a, m, p));
}

double one_sided_error_norm(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p) {
  check_square(a, "one_sided_error_norm");
  check_interp(a, p, "one_sided_error_norm");
  const DenseMatrix id = DenseMatrix::identity(a.nrows());
  return a_norm(a, (id - x_projector(a, p)) * (id - solve(m, a)));
}

double weak_approximation_constant(const DenseMatrix& a, const DenseMatrix& x,
                                   const DenseMatrix& p) {
  check_square(a, "weak_approximation_constant");
  check_interp(a, p, "weak_approximation_constant");
  if (p.ncols() >= a.nrows())
    throw DimensionError("weak_approximation_constant: range of P is the whole space");
  return lambda_max(complement_form(x, p), a);
}

double ktg(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p) {
  return weak_approximation_constant(a, symmetrized(symmetrized_mtilde(a, m)), p);
}

DenseMatrix ideal_interpolation(const DenseMatrix& a, const BlockSplit& split) {
  const DenseMatrix cf = to_cf_ordering(a, split);
  const Index nf = split.n_fine();
  const Index nc = split.n_coarse();
  DenseMatrix a_ff(nf, nf);
  DenseMatrix a_fc(nf, nc);
  for (Index i = 0; i < nf; ++i) {
    for (Index j = 0; j < nf; ++j) a_ff(i, j) = cf(i, j);
    for (Index j = 0; j < nc; ++j) a_fc(i, j) = cf(i, nf + j);
  }
  DenseMatrix p(nf + nc, nc);
  if (nf > 0) {
    const DenseMatrix w = solve(a_ff, a_fc);
    for (Index i = 0; i < nf; ++i)
      for (Index j = 0; j < nc; ++j) p(i, j) = -w(i, j);
  }
  for (Index j = 0; j < nc; ++j) p(nf + j, j) = 1.0;
  return p;
}

OptimalInterpolation optimal_interpolation(const DenseMatrix& a, const DenseMatrix& m, Index n_c) {
  check_square(a, "optimal_interpolation");
  const Index n = a.nrows();
  if (n_c == 0 || n_c >= n) throw DimensionError("optimal_interpolation: need 0 < n_c < n");
  const DenseMatrix mt = symmetrized(symmetrized_mtilde(a, m));
  const SymmetricEigen eig = dense_sym_eig(symmetrized(a), mt);
  OptimalInterpolation out;
  out.p = DenseMatrix(n, n_c);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n_c; ++k) out.p(i, k) = eig.vectors(i, k);
  out.eigenvalues = eig.values;
  out.bound = 1.0 - eig.values[n_c];
  return out;
}

bool TheoryReport::chain_holds(double rel_tol) const {
  const double scale = std::max({std::abs(pr_energy), std::abs(trace_schur), std::abs(trace_plain), 1.0});
  return pr_energy <= trace_schur + rel_tol * scale && trace_schur <= trace_plain + rel_tol * scale;
}

TheoryReport stability_bounds(const DenseMatrix& a, const SpectralEquivalence& x,
                              const BlockSplit& split, const DenseMatrix& p) {
  check_square(a, "stability_bounds");
  if (p.nrows() != a.nrows() || p.ncols() != split.n_coarse())
    throw DimensionError("stability_bounds: P shape does not match split");
  x.validate();
  const DenseMatrix cf = symmetrized(to_cf_ordering(a, split));
  const DenseMatrix r = injection_r(split);
  const DenseMatrix s = injection_s(split);
  const DenseMatrix l = cholesky(cf);

  TheoryReport rep;
  const DenseMatrix ptap = symmetrized(p.transposed() * cf * p);
  const DenseMatrix pr = p * r;
  rep.pr_energy = lambda_max(pr.transposed() * cf * pr, cf);
  // R A^{-1} R^T: inverse of the Schur complement of A_ff.
  const DenseMatrix schur_inv = r * cholesky_solve(l, r.transposed());
  rep.trace_schur = trace(ptap * schur_inv);
  const SymmetricEigen spectrum = dense_sym_eig(cf);
  rep.trace_plain = trace(ptap) / spectrum.values.front();

  if (split.n_fine() > 0) {
    const DenseMatrix a_s = s.transposed() * cf * s;
    Vector cf_diag = cf.diag();
    const Vector x_all = x.x_diagonal(cf_diag);
    Vector x_f(x_all.begin(), x_all.begin() + static_cast<std::ptrdiff_t>(split.n_fine()));
    const SymmetricEigen e = dense_sym_eig(symmetrized(a_s), DenseMatrix::diagonal(x_f));
    rep.kappa_s = e.values.front();
    rep.c2_meas = e.values.back();
  }
  return rep;
}

ApproximationConstants approximation_constants(const DenseMatrix& a, const DenseMatrix& p) {
  check_square(a, "approximation_constants");
  check_interp(a, p, "approximation_constants");
  ApproximationConstants out;
  if (p.ncols() == a.nrows()) {
    x_projector(a, p);  // rank check
    return out;
  }
  const DenseMatrix as = symmetrized(a);
  const DenseMatrix a2 = symmetrized(as * as);
  const double norm_a = spectral_norm_sym(as);
  const DenseMatrix id = DenseMatrix::identity(a.nrows());
  out.beta_sap = norm_a * std::max(0.0, lambda_max(complement_form(as, p), a2));
  out.beta_wap = norm_a * norm_a * std::max(0.0, lambda_max(complement_form(id, p), a2));
  return out;
}

TheoryReport theory_report(const DenseMatrix& a, const DenseMatrix& m,
                           const SpectralEquivalence& x, const BlockSplit& split,
                           const DenseMatrix& p) {
  TheoryReport rep = stability_bounds(a, x, split, p);
  // Same ordering for every operator.
  const DenseMatrix cf = symmetrized(to_cf_ordering(a, split));
  const DenseMatrix mcf = to_cf_ordering(m, split);
  rep.etg_norm = two_grid_error_norm(cf, mcf, p);
  rep.ktg = p.ncols() < a.nrows() ? ktg(cf, mcf, p) : 1.0;
  const ApproximationConstants c = approximation_constants(cf, p);
  rep.beta_wap = c.beta_wap;
  rep.beta_sap = c.beta_sap;
  return rep;
}

} // namespace emin
