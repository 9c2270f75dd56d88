#include <doctest.h>

#include <cmath>

#include "emin/error.hpp"
#include "emin/smoothing.hpp"
#include "oracles.hpp"

using namespace emin;

namespace {

double a_norm(const DenseMatrix& a, const Vector& x) {
  Vector ax = a * x;
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += ax[i] * x[i];
  return std::sqrt(s);
}

DenseMatrix lower_triangle(const DenseMatrix& a) {
  DenseMatrix l(a.nrows(), a.ncols());
  for (Index i = 0; i < a.nrows(); ++i)
    for (Index j = 0; j <= i; ++j) l(i, j) = a(i, j);
  return l;
}

}  // namespace

TEST_SUITE("smoothing") {

TEST_CASE("jacobi single sweep from zero is diag(A)^{-1} b") {
  SparseMatrix a = oracle::laplacian_1d(5);
  Vector b{1.0, 2.0, 3.0, 4.0, 5.0};
  Relaxation rel{RelaxationKind::jacobi, 1.0, 1};
  Vector x = relax_sweep(rel, a, Vector(5, 0.0), b);
  for (Index i = 0; i < 5; ++i) CHECK(x[i] == b[i] / 2.0);
}

TEST_CASE("exact solution is a fixed point") {
  SparseMatrix a = oracle::laplacian_1d(6);
  Vector xs{1.0, -1.0, 2.0, 0.5, 0.0, 3.0};
  Vector b = spmv(a, xs);
  for (auto kind : {RelaxationKind::jacobi, RelaxationKind::gauss_seidel}) {
    Vector x = relax_sweep(Relaxation{kind, 0.8, 3}, a, xs, b);
    for (Index i = 0; i < 6; ++i) CHECK(std::abs(x[i] - xs[i]) < 1e-14);
  }
}

TEST_CASE("gauss-seidel forward substitution") {
  SparseMatrix a = oracle::laplacian_1d(2);
  Vector x = relax_sweep(Relaxation{RelaxationKind::gauss_seidel, 1.0, 1}, a, Vector(2, 0.0),
                         Vector{1.0, 1.0});
  CHECK(x[0] == 0.5);
  CHECK(x[1] == 0.75);
}

TEST_CASE("relaxation_matrix matches a sweep") {
  Rng rng(2);
  DenseMatrix ad = oracle::random_spd(7, rng);
  SparseMatrix a = SparseMatrix::from_dense(ad);
  Vector x0 = rng.uniform_vector(7), b = rng.uniform_vector(7);
  for (auto kind : {RelaxationKind::jacobi, RelaxationKind::gauss_seidel}) {
    Relaxation rel{kind, 0.7, 1};
    DenseMatrix m = relaxation_matrix(rel, ad);
    Vector r = residual(a, x0, b);
    Vector corr = oracle::gauss_solve(m, r);
    Vector x = relax_sweep(rel, a, x0, b);
    for (Index i = 0; i < 7; ++i) CHECK(std::abs(x[i] - (x0[i] + corr[i])) < 1e-12);
  }
}

TEST_CASE("symmetrized M~") {
  Rng rng(4);
  DenseMatrix a = oracle::random_spd(6, rng);
  CHECK(oracle::max_abs_diff(symmetrized_mtilde(a, a), a) < 1e-12 * max_abs(a));

  DenseMatrix d = oracle::jacobi_m(a);
  DenseMatrix two_d_minus_a = 2.0 * d - a;
  DenseMatrix ref = oracle::matmul(oracle::matmul(d, inverse(two_d_minus_a)), d);
  CHECK(oracle::max_abs_diff(symmetrized_mtilde(a, d), ref) < 1e-12 * max_abs(ref));

  DenseMatrix m = lower_triangle(a);
  DenseMatrix mt = symmetrized_mtilde(a, m);
  DenseMatrix id = oracle::identity(6);
  DenseMatrix lhs = id - oracle::matmul(inverse(mt), a);
  DenseMatrix rhs = oracle::matmul(id - oracle::matmul(inverse(m), a),
                                   id - oracle::matmul(inverse(m.transposed()), a));
  CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("is_a_convergent") {
  Rng rng(6);
  DenseMatrix a = oracle::random_spd(5, rng);
  CHECK(is_a_convergent(a, a));
  CHECK_FALSE(is_a_convergent(a, 0.5 * a));
  DenseMatrix lap = oracle::laplacian_1d(10).to_dense();
  CHECK(is_a_convergent(lap, oracle::jacobi_m(lap)));
  CHECK_FALSE(is_a_convergent(lap, oracle::jacobi_m(lap, 2.5)));
}

TEST_CASE("convergent relaxation reduces the energy norm") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + rng.below(48);
    DenseMatrix ad = oracle::random_spd(n, rng);
    SparseMatrix a = SparseMatrix::from_dense(ad);
    for (auto kind : {RelaxationKind::jacobi, RelaxationKind::gauss_seidel}) {
      Relaxation rel{kind, kind == RelaxationKind::jacobi ? 0.5 : 1.0, 1};
      if (!is_a_convergent(ad, relaxation_matrix(rel, ad))) continue;
      Vector x = rng.uniform_vector(n);
      Vector y = relax_sweep(rel, a, x, Vector(n, 0.0));
      CHECK(a_norm(ad, y) < a_norm(ad, x));
    }
  }
}

TEST_CASE("jacobi spectral radius estimate") {
  SparseMatrix a = oracle::laplacian_1d(20);
  const double exact = 1.0 + std::cos(std::acos(-1.0) / 21.0);
  CHECK(std::abs(jacobi_spectral_radius(a, 400) - exact) < 1e-3);
  CHECK(jacobi_spectral_radius(SparseMatrix::identity(4)) == doctest::Approx(1.0));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS((Relaxation{RelaxationKind::jacobi, 0.0, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((Relaxation{RelaxationKind::jacobi, 1.0, 0}.validate()), ConfigError);
  SpectralEquivalence x;
  x.c1 = 2.0;
  x.c2 = 1.0;
  CHECK_THROWS_AS(x.validate(), ConfigError);
  SpectralEquivalence id{EquivalenceOperator::scaled_identity, 3.0, 1.0, 1.0};
  CHECK(id.x_diagonal(Vector{5.0, 7.0}) == Vector{3.0, 3.0});
  SpectralEquivalence dg;
  CHECK(dg.x_diagonal(Vector{5.0, 7.0}) == Vector{5.0, 7.0});
}

}  // TEST_SUITE
