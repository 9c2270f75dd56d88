#include <doctest.h>

#include "emin/error.hpp"
#include "emin/permutation.hpp"
#include "emin/sylvester.hpp"
#include "oracles.hpp"

using namespace emin;

namespace {

DenseMatrix diag(std::initializer_list<double> d) {
  std::vector<double> v(d);
  return DenseMatrix::diagonal(v);
}

// vec_col(A W B + C W D) = (B^T (x) A + D^T (x) C) vec_col(W)
DenseMatrix kron_operator(const MatrixEquation& eq) {
  return oracle::kron(oracle::transpose(eq.b), eq.a) + oracle::kron(oracle::transpose(eq.d), eq.c);
}

DenseMatrix from_vec_col(const Vector& v, Index n, Index m) {
  DenseMatrix w(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) w(i, j) = v[i + j * n];
  return w;
}

}  // namespace

TEST_SUITE("sylvester") {

TEST_CASE("preconditioner formula") {
  MatrixEquation eq{diag({1.0, 2.0}), diag({3.0}), DenseMatrix::identity(2), diag({4.0}),
                    DenseMatrix(2, 1, 1.0)};
  DenseMatrix p = hadamard_diag_preconditioner(eq);
  CHECK(p(0, 0) == doctest::Approx(1.0 / 7.0));
  CHECK(p(1, 0) == doctest::Approx(1.0 / 10.0));

  Rng rng(1);
  DenseMatrix a = oracle::random_spd(4, rng), d = oracle::random_spd(3, rng);
  DenseMatrix ps = hadamard_diag_preconditioner(sylvester_equation(a, d, DenseMatrix(4, 3)));
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(ps(i, j) == doctest::Approx(1.0 / (a(i, i) + d(j, j))));

  MatrixEquation bad{diag({1.0, -2.0}), diag({1.0}), DenseMatrix::identity(2), diag({2.0}),
                     DenseMatrix(2, 1, 1.0)};
  CHECK_THROWS_AS(hadamard_diag_preconditioner(bad), SingularMatrixError);
}

TEST_CASE("diagonal data converge in one iteration") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 1 + rng.below(6), m = 1 + rng.below(6);
    auto rd = [&](Index k) {
      DenseMatrix x(k, k);
      for (Index i = 0; i < k; ++i) x(i, i) = rng.uniform(0.5, 3.0);
      return x;
    };
    MatrixEquation eq{rd(n), rd(m), rd(n), rd(m), oracle::random_dense(n, m, rng)};
    SylvesterResult r = sylvester_cg(eq, 1, 0.0);
    CHECK(r.iterations == 1);
    CHECK(r.residual_history.back() <= 1e-13 * oracle::frob(eq.f));
  }
}

TEST_CASE("zero right-hand side") {
  Rng rng(3);
  MatrixEquation eq = sylvester_equation(oracle::random_spd(4, rng), oracle::random_spd(3, rng),
                                         DenseMatrix(4, 3));
  SylvesterResult r = sylvester_cg(eq, 20);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(max_abs(r.w) == 0.0);
}

TEST_CASE("matches the Kronecker oracle") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + rng.below(5), m = 2 + rng.below(5);
    MatrixEquation eq = trial % 2 == 0
        ? sylvester_equation(oracle::random_spd(n, rng), oracle::random_spd(m, rng),
                             oracle::random_dense(n, m, rng))
        : MatrixEquation{oracle::random_spd(n, rng), oracle::random_spd(m, rng),
                         oracle::random_spd(n, rng), oracle::random_spd(m, rng),
                         oracle::random_dense(n, m, rng)};
    Vector ref = oracle::gauss_solve(kron_operator(eq), vec_col(eq.f));
    SylvesterResult r = sylvester_cg(eq, 200, 1e-14);
    DenseMatrix w_ref = from_vec_col(ref, n, m);
    CHECK(oracle::frob(r.w - w_ref) <= 1e-8 * oracle::frob(w_ref));
    for (Index k = 1; k < r.functional_history.size(); ++k)
      CHECK(r.functional_history[k] <=
            r.functional_history[k - 1] + 1e-13 * std::abs(r.functional_history[k - 1]));
  }
}

TEST_CASE("vectorized operator equivalence") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 1 + rng.below(6), m = 1 + rng.below(6);
    MatrixEquation eq{oracle::random_dense(n, n, rng), oracle::random_dense(m, m, rng),
                      oracle::random_dense(n, n, rng), oracle::random_dense(m, m, rng),
                      DenseMatrix(n, m)};
    DenseMatrix w = oracle::random_dense(n, m, rng);
    Vector lhs = vec_col(eq.apply(w));
    Vector rhs = kron_operator(eq) * vec_col(w);
    for (Index i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-13);
    // row-major form goes through the shuffle: Y (A (x) B^T + C (x) D^T) Y^T
    DenseMatrix row_op = oracle::kron(eq.a, oracle::transpose(eq.b)) +
                         oracle::kron(eq.c, oracle::transpose(eq.d));
    DenseMatrix shuffled = perfect_shuffle(n, m).conjugate(row_op);
    CHECK(oracle::max_abs_diff(shuffled, kron_operator(eq)) <= 1e-15);
  }
}

TEST_CASE("errors") {
  MatrixEquation bad{DenseMatrix::identity(2), DenseMatrix::identity(3), DenseMatrix::identity(2),
                     DenseMatrix::identity(3), DenseMatrix(3, 3)};
  CHECK_THROWS_AS(bad.validate(), DimensionError);
  MatrixEquation indefinite = sylvester_equation(-1.0 * DenseMatrix::identity(2),
                                                 -1.0 * DenseMatrix::identity(2),
                                                 DenseMatrix(2, 2, 1.0));
  indefinite.a(0, 1) = indefinite.a(1, 0) = 0.5;
  CHECK_THROWS_AS(sylvester_cg(indefinite, 10), BreakdownError);
}

}  // TEST_SUITE
