#include <doctest.h>

#include <cmath>

#include "emin/error.hpp"
#include "emin/hierarchy.hpp"
#include "emin/problems.hpp"
#include "oracles.hpp"

using namespace emin;

namespace {

Problem poisson(Index n) {
  ProblemSpec s;
  s.n = n;
  return assemble(s);
}

}  // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("galerkin product") {
  Rng rng(1);
  DenseMatrix ad = oracle::random_spd(6, rng);
  SparseMatrix a = SparseMatrix::from_dense(ad);
  CHECK(oracle::max_abs_diff(galerkin_product(SparseMatrix::identity(6), a).to_dense(), ad) == 0.0);
  SparseMatrix ones = SparseMatrix::from_dense(DenseMatrix(6, 1, 1.0));
  double total = 0.0;
  for (double v : ad.values()) total += v;
  CHECK(galerkin_product(ones, a).at(0, 0) == doctest::Approx(total).epsilon(1e-14));

  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 10 + rng.below(20), nc = 3 + rng.below(7);
    DenseMatrix pd = oracle::random_dense(n, nc, rng);
    for (double& v : pd.values())
      if (rng.uniform() < 0.6) v = 0.0;
    DenseMatrix bd = oracle::random_spd(n, rng);
    DenseMatrix ref = oracle::matmul(oracle::transpose(pd), oracle::matmul(bd, pd));
    DenseMatrix got = galerkin_product(SparseMatrix::from_dense(pd), SparseMatrix::from_dense(bd)).to_dense();
    CHECK(oracle::max_abs_diff(got, ref) <= 1e-12 * max_abs(ref));
  }
  CHECK_THROWS_AS(galerkin_product(SparseMatrix::identity(3), a), DimensionError);
}

TEST_CASE("small problems stay on one level") {
  SparseMatrix a = oracle::laplacian_1d(8);
  Hierarchy h = setup(a, SetupConfig{});
  CHECK(h.num_levels() == 1);
  Vector b{1, 2, 3, 4, 5, 6, 7, 8};
  Vector x = vcycle(h, 0, Vector(8, 0.0), b);
  Vector r = residual(a, x, b);
  CHECK(norm2(r) <= 1e-13 * norm2(b));
}

TEST_CASE("1D Laplacian 9 -> 5 -> 3") {
  SetupConfig cfg;
  cfg.max_coarse = 3;
  Hierarchy h = setup(oracle::laplacian_1d(9), cfg);
  REQUIRE(h.num_levels() == 3);
  CHECK(h.level(0).a.nrows() == 9);
  CHECK(h.level(1).a.nrows() == 5);
  CHECK(h.level(2).a.nrows() == 3);
  CHECK(h.operator_complexity() >= 1.0);
  CHECK(h.cycle_complexity() >= h.operator_complexity());
}

TEST_CASE("galerkin consistency and level sizes") {
  Problem p = poisson(16);
  Hierarchy h = setup(p.matrix, SetupConfig{});
  for (Index k = 0; k + 1 < h.num_levels(); ++k) {
    const Level& l = h.level(k);
    DenseMatrix pd = l.p.to_dense();
    DenseMatrix ref = oracle::matmul(oracle::transpose(pd), oracle::matmul(l.a.to_dense(), pd));
    DenseMatrix next = h.level(k + 1).a.to_dense();
    CHECK(oracle::frob(next - ref) <= 1e-12 * oracle::frob(next));
    CHECK(h.level(k + 1).a.nrows() < l.a.nrows());
    CHECK(is_symmetric(h.level(k + 1).a));
    // constant candidate interpolated exactly
    Vector pc = spmv(l.p, h.level(k + 1).candidates.vectors.column(0));
    Vector c = l.candidates.vectors.column(0);
    const double scale = norm2(c);
    for (Index i = 0; i < c.size(); ++i)
      CHECK(std::abs(pc[i] / norm2(pc) - c[i] / scale) < 1e-10);
  }
}

TEST_CASE("vcycle basics") {
  Problem p = poisson(32);
  SetupConfig cfg;
  Hierarchy h = setup(p.matrix, cfg);
  const Index n = p.matrix.nrows();
  Vector z = vcycle(h, 0, Vector(n, 0.0), Vector(n, 0.0));
  CHECK(norm2(z) == 0.0);

  Rng rng(3);
  Vector xs = rng.uniform_vector(n);
  Vector b = spmv(p.matrix, xs);
  Vector fixed = vcycle(h, 0, xs, b);
  for (Index i = 0; i < n; ++i) CHECK(std::abs(fixed[i] - xs[i]) < 1e-10);

  for (int trial = 0; trial < 20; ++trial) {
    Vector e = rng.uniform_vector(n);
    Vector e1 = vcycle(h, 0, e, Vector(n, 0.0));
    CHECK(energy_norm(p.matrix, e1) < energy_norm(p.matrix, e));
  }
}

TEST_CASE("solve") {
  Problem p = poisson(64);
  Hierarchy h = setup(p.matrix, SetupConfig{});
  const Index n = p.matrix.nrows();
  Vector b = spmv(p.matrix, Vector(n, 1.0));
  SolveResult r = solve(h, b, 1e-8, 25);
  CHECK(r.converged);
  CHECK(r.iterations <= 25);
  for (double v : r.x) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

  SolveResult none = solve(h, b, 0.0, 0);
  CHECK(none.residual_history.size() == 1);
  CHECK(none.iterations == 0);
  CHECK(norm2(none.x) == 0.0);

  SolveResult cg = solve(h, b, 1e-10, 50, Acceleration::cg);
  CHECK(cg.converged);
  CHECK(cg.iterations <= r.iterations);
}

TEST_CASE("cg error is monotone in the energy norm") {
  Problem p = poisson(16);
  Hierarchy h = setup(p.matrix, SetupConfig{});
  const Index n = p.matrix.nrows();
  Rng rng(4);
  Vector b = rng.uniform_vector(n);
  Vector xs = solve(DenseMatrix(p.matrix.to_dense()), b);
  double prev = INFINITY;
  for (Index k = 0; k <= 8; ++k) {
    Vector x = solve(h, b, 0.0, k, Acceleration::cg).x;
    Vector e(n);
    for (Index i = 0; i < n; ++i) e[i] = x[i] - xs[i];
    const double en = energy_norm(p.matrix, e);
    CHECK(en <= prev * (1.0 + 1e-10));
    prev = en;
  }
}

TEST_CASE("weighted mode builds a working hierarchy") {
  Problem p = poisson(32);
  SetupConfig cfg;
  cfg.mode = EminMode::weighted;
  cfg.tau = 0.5;
  Hierarchy h = setup(p.matrix, cfg);
  CHECK(h.num_levels() > 1);
  CHECK(measure_contraction(h) < 1.0);
}

TEST_CASE("configuration errors") {
  SetupConfig cfg;
  cfg.tau = 2.0;
  CHECK_THROWS_AS(setup(oracle::laplacian_1d(4), cfg), ConfigError);
  cfg = SetupConfig{};
  cfg.pattern_degree = 0;
  CHECK_THROWS_AS(setup(oracle::laplacian_1d(4), cfg), ConfigError);
  CHECK_THROWS_AS(emin_mode_from_string("smoothed"), ConfigError);
  CHECK(emin_mode_from_string("weighted") == EminMode::weighted);
}

TEST_CASE("stagnation is reported") {
  // strength graph with no edges: every point stays coarse
  SetupConfig cfg;
  cfg.max_coarse = 2;
  CHECK_THROWS_AS(setup(SparseMatrix::identity(10), cfg), StagnationError);
}

}  // TEST_SUITE
