#pragma once

#include <span>

#include "emin/dense.hpp"
#include "emin/sparse.hpp"

namespace emin {

enum class RelaxationKind { jacobi, gauss_seidel };

// Stationary relaxation x <- x + M^{-1}(b - A x).
// Jacobi: M = diag(A)/omega. Gauss-Seidel: M = lower triangle of A
// (including the diagonal), natural ordering, forward only.
struct Relaxation {
  RelaxationKind kind = RelaxationKind::jacobi;
  double omega = 1.0;
  Index sweeps = 1;

  void validate() const;
};

// Choice of the operator X assumed spectrally equivalent to the
// symmetrized relaxation: c1 X <= M~ <= c2 X.
enum class EquivalenceOperator { diagonal_of_a, scaled_identity };

struct SpectralEquivalence {
  EquivalenceOperator op = EquivalenceOperator::diagonal_of_a;
  double scale = 1.0;  // X = scale * I for scaled_identity
  double c1 = 1.0;
  double c2 = 1.0;

  // Diagonal of X for the given matrix diagonal.
  Vector x_diagonal(std::span<const double> a_diagonal) const;
  void validate() const;
};

// Applies rel.sweeps passes to x in place.
void relax_in_place(const Relaxation& rel, const SparseMatrix& a, std::span<double> x,
                    std::span<const double> b);
Vector relax_sweep(const Relaxation& rel, const SparseMatrix& a, std::span<const double> x,
                   std::span<const double> b);

// Spectral radius of D^{-1} A by power iteration on D^{-1/2} A D^{-1/2}.
double jacobi_spectral_radius(const SparseMatrix& a, int iters = 50);

// Dense M for a single sweep of rel on a.
DenseMatrix relaxation_matrix(const Relaxation& rel, const DenseMatrix& a);

// M~ = M^T (M + M^T - A)^{-1} M.
DenseMatrix symmetrized_mtilde(const DenseMatrix& a, const DenseMatrix& m);

// True iff M + M^T - A is positive definite (smallest eigenvalue
// above 1e-12 ||A||).
bool is_a_convergent(const DenseMatrix& a, const DenseMatrix& m);

} // namespace emin
