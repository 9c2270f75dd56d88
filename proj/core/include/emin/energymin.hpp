#pragma once

#include <optional>
#include <vector>

#include "emin/coarsening.hpp"
#include "emin/dense.hpp"
#include "emin/pattern.hpp"
#include "emin/smoothing.hpp"
#include "emin/sparse.hpp"

namespace emin {

// Candidate (constraint) vectors as columns of an n x n_B matrix,
// A-orthonormal once produced by prepare_candidates.
struct CandidateSet {
  DenseMatrix vectors;

  Index size() const noexcept { return vectors.nrows(); }
  Index count() const noexcept { return vectors.ncols(); }
  DenseMatrix fine_rows(const BlockSplit& split) const;    // B_f
  DenseMatrix coarse_rows(const BlockSplit& split) const;  // B_c
};

// Modified Gram-Schmidt in the A-inner product. Throws
// DependentVectorError when a vector's A-norm drops below 1e-13 (relative
// to its original A-norm) after orthogonalization.
CandidateSet prepare_candidates(const SparseMatrix& a, const DenseMatrix& raw);

// Pattern-restricted weighted energy-minimization system
//   L^ W = [tau A_ff W + c2 (1-tau) X_ff W B_c B_c^T]|N
//   B^   = [c2 (1-tau) X_ff B_f B_c^T - tau A_fc]|N
// with the Hadamard diagonal preconditioner
//   D_ij = 1 / (tau (A_ff)_ii + c2 (1-tau) (B_c B_c^T)_jj (X_ff)_ii).
// B_c B_c^T is kept in factored form (n_c x n_B).
struct WeightedSystem {
  double tau = 1.0;
  double c2 = 1.0;
  SparseMatrix a_ff;
  SparseMatrix a_fc;
  Vector x_ff_diag;
  DenseMatrix b_c;
  PatternPtr pattern;
  PatternMatrix rhs;
  PatternMatrix dprec;

  PatternMatrix apply(const PatternMatrix& w) const;
  // F^(W) = 1/2 <L^ W, W> - <W, B^>
  double functional(const PatternMatrix& w) const;
  // Diagonal of B_c B_c^T.
  Vector bcbct_diagonal() const;
};

WeightedSystem build_weighted_system(const SparseMatrix& a, const BlockSplit& split,
                                     const CandidateSet& candidates,
                                     const SpectralEquivalence& x, double tau,
                                     PatternPtr pattern);

struct PcgOptions {
  bool precondition = true;
};

struct PcgResult {
  PatternMatrix w;
  std::vector<double> residual_history;        // ||R_k||_F, k = 0..iterations
  std::vector<double> precond_residual_history;  // <R_k, Z_k>^{1/2}
  std::vector<double> functional_history;      // F^(W_k)
  Index iterations = 0;
  bool converged = false;
};

// Conjugate gradient for L^ W = B^ in the Frobenius Hilbert space over the
// pattern, preconditioned by the Hadamard product with sys.dprec. Stops when
// the preconditioned residual norm falls below tol times its initial value
// or after max_iters. Throws BreakdownError on non-finite values.
PcgResult pcg_frobenius(const WeightedSystem& sys, const PatternMatrix& w0, Index max_iters,
                        double tol = 1e-10, const PcgOptions& options = {});

// Assembled interpolation P = [W; I] in the original DOF ordering.
struct Interpolation {
  PatternMatrix w;
  BlockSplit split;
  SparseMatrix p;
  std::vector<double> residual_history;
  std::vector<double> constraint_violation_history;  // max_i |(W B_c - B_f)_i| per iterate
};

// Row i = e_{c(i)} at C-points, row i = W row at F-points.
SparseMatrix assemble_P(const PatternMatrix& w, const BlockSplit& split);

// Row-wise minimal-norm solution of W B_c = B_f on the pattern.
// Throws InfeasibleConstraintError when an F-row has an empty pattern
// but a nonzero row of B_f.
PatternMatrix initial_guess(const BlockSplit& split, const CandidateSet& candidates,
                            PatternPtr pattern);

struct ConstrainedOptions {
  bool precondition = true;
  double tol = 0.0;  // relative preconditioned-residual tolerance; 0 runs all iterations
};

// Minimizes tr(P^T A P) = <A_ff W, W> + 2 <W, A_fc> + tr(A_cc) over
// { W on the pattern : W B_c = B_f } by projected, diagonally
// preconditioned CG started from initial_guess.
Interpolation constrained_energymin(const SparseMatrix& a, const BlockSplit& split,
                                    const CandidateSet& candidates, PatternPtr pattern,
                                    Index iters, const ConstrainedOptions& options = {});

// Weighted path: initial_guess, then pcg_frobenius for `iters` iterations.
Interpolation weighted_energymin(const SparseMatrix& a, const BlockSplit& split,
                                 const CandidateSet& candidates, const SpectralEquivalence& x,
                                 double tau, PatternPtr pattern, Index iters,
                                 double tol = 1e-10, const PcgOptions& options = {});

// (A W)|N for W on a pattern whose rows index A's columns.
PatternMatrix restricted_product(const SparseMatrix& a, const PatternMatrix& w,
                                 const PatternPtr& target);
// M|N for a sparse M of the pattern's shape.
PatternMatrix restrict_sparse(const PatternPtr& pattern, const SparseMatrix& m);

// max over rows of |(W B_c - B_f)_i|_inf.
double constraint_violation(const PatternMatrix& w, const DenseMatrix& b_f,
                            const DenseMatrix& b_c);

} // namespace emin
