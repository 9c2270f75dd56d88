#pragma once

#include <vector>

#include "emin/dense.hpp"

namespace emin {

// A W B + C W D = F with W, F of shape n x m.
struct MatrixEquation {
  DenseMatrix a;  // n x n
  DenseMatrix b;  // m x m
  DenseMatrix c;  // n x n
  DenseMatrix d;  // m x m
  DenseMatrix f;  // n x m

  Index n() const noexcept { return a.nrows(); }
  Index m() const noexcept { return b.nrows(); }
  void validate() const;
  // True when A, B, C, D are all diagonal; apply() then works entry-wise.
  bool diagonal_data() const;
  DenseMatrix apply(const DenseMatrix& w) const;
};

// Sylvester form A W + W D = F.
MatrixEquation sylvester_equation(DenseMatrix a, DenseMatrix d, DenseMatrix f);

// Entry (i,j) = 1 / (B_jj A_ii + D_jj C_ii). Throws SingularMatrixError
// naming (i,j) when a denominator vanishes.
DenseMatrix hadamard_diag_preconditioner(const MatrixEquation& eq);

struct SylvesterResult {
  DenseMatrix w;
  std::vector<double> residual_history;  // ||A W B + C W D - F||_F per iterate
  std::vector<double> functional_history;  // 1/2 <L W, W> - <F, W>
  Index iterations = 0;
  bool converged = false;
};

// Preconditioned CG in the Frobenius inner product. Stops when
// ||residual||_F <= tol ||F||_F. Throws BreakdownError on nonpositive
// curvature (operator not positive definite).
SylvesterResult sylvester_cg(const MatrixEquation& eq, Index max_iters, double tol = 1e-10);

} // namespace emin
