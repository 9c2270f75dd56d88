#pragma once

#include "emin/coarsening.hpp"
#include "emin/dense.hpp"
#include "emin/smoothing.hpp"

namespace emin {

// Dense two-grid diagnostics; everything here is O(n^3) and meant for n <= 500.

// E_TG = (I - M^{-T} A)(I - pi_A)(I - M^{-1} A), pi_A = P (P^T A P)^{-1} P^T A.
DenseMatrix two_grid_propagator(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p);

// ||E_TG||_A. Throws SingularMatrixError for rank-deficient P.
double two_grid_error_norm(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p);

// ||(I - pi_A)(I - M^{-1} A)||_A, the pre-smoothing-only propagator.
double one_sided_error_norm(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p);

// lambda_max(X - X P (P^T X P)^{-1} P^T X, A): the weak approximation
// constant of P measured in the X-norm.
double weak_approximation_constant(const DenseMatrix& a, const DenseMatrix& x,
                                   const DenseMatrix& p);

// K_TG = weak_approximation_constant with X = M~. Satisfies
// ||E_TG||_A = 1 - 1/K_TG. Throws DimensionError when P has n columns.
double ktg(const DenseMatrix& a, const DenseMatrix& m, const DenseMatrix& p);

// [-A_ff^{-1} A_fc; I] with rows in CF ordering.
DenseMatrix ideal_interpolation(const DenseMatrix& a, const BlockSplit& split);

struct OptimalInterpolation {
  DenseMatrix p;       // n x n_c, the smallest generalized eigenvectors of A v = lambda M~ v
  double bound = 0.0;  // 1 - lambda_{n_c+1}
  Vector eigenvalues;
};

OptimalInterpolation optimal_interpolation(const DenseMatrix& a, const DenseMatrix& m, Index n_c);

struct TheoryReport {
  double etg_norm = 0.0;
  double ktg = 0.0;
  double kappa_s = 0.0;     // lambda_min(X_s^{-1} A_s)
  double c2_meas = 0.0;     // lambda_max(X_s^{-1} A_s)
  double pr_energy = 0.0;   // ||P R||_A^2
  double trace_schur = 0.0; // tr(P^T A P  R A^{-1} R^T)
  double trace_plain = 0.0; // ||A^{-1}|| tr(P^T A P)
  double beta_wap = 0.0;
  double beta_sap = 0.0;

  // ||PR||_A^2 <= trace_schur <= trace_plain, with relative slack tol.
  bool chain_holds(double rel_tol = 1e-10) const;
};

// Fills kappa_s, c2_meas, pr_energy, trace_schur and trace_plain.
// `a` is in the original ordering; `p` has its rows in CF ordering.
// Throws SingularMatrixError when A (hence its Schur complement) is singular.
TheoryReport stability_bounds(const DenseMatrix& a, const SpectralEquivalence& x,
                              const BlockSplit& split, const DenseMatrix& p);

struct ApproximationConstants {
  double beta_wap = 0.0;  // ||A||^2 lambda_max(I - P (P^T P)^{-1} P^T, A^2)
  double beta_sap = 0.0;  // ||A||   lambda_max(A - A P (P^T A P)^{-1} P^T A, A^2)
};

ApproximationConstants approximation_constants(const DenseMatrix& a, const DenseMatrix& p);

// Every field of TheoryReport for relaxation M; `p` rows in CF ordering.
TheoryReport theory_report(const DenseMatrix& a, const DenseMatrix& m,
                           const SpectralEquivalence& x, const BlockSplit& split,
                           const DenseMatrix& p);

} // namespace emin
