#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emin/error.hpp"
#include "emin/problems.hpp"
#include "oracles.hpp"

using namespace emin;

namespace {

// Independent P1 assembly: reference-element gradients mapped through the
// inverse Jacobian, dense global matrix, boundary removed afterwards.
double coefficient(Index i, Index j, double k) {
  const bool xi = i % 2 == 1, yj = j % 2 == 1;
  if (xi && !yj) return k;
  if (!xi && yj) return k;
  return 1.0;
}

DenseMatrix naive_assembly(Index n, double k_big, bool oscillatory, double eps = 1.0,
                           double theta = 0.0) {
  const Index side = n + 1;
  const double h = 1.0 / static_cast<double>(n);
  DenseMatrix full(side * side, side * side);
  const double c = std::cos(theta), s = std::sin(theta);
  // Q^T diag(1, eps) Q, Q = [c -s; s c]
  const double t00 = c * c + eps * s * s, t01 = (eps - 1.0) * c * s, t11 = s * s + eps * c * c;
  const double ref_grad[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const Index tris[2][3][2] = {{{i, j}, {i + 1, j}, {i + 1, j + 1}},
                                   {{i, j}, {i + 1, j + 1}, {i, j + 1}}};
      for (const auto& tri : tris) {
        double x[3], y[3];
        for (int a = 0; a < 3; ++a) {
          x[a] = tri[a][0] * h;
          y[a] = tri[a][1] * h;
        }
        const double j00 = x[1] - x[0], j01 = x[2] - x[0], j10 = y[1] - y[0], j11 = y[2] - y[0];
        const double det = j00 * j11 - j01 * j10;
        // grad phi = J^{-T} ref_grad
        double g[3][2];
        for (int a = 0; a < 3; ++a) {
          g[a][0] = (j11 * ref_grad[a][0] - j10 * ref_grad[a][1]) / det;
          g[a][1] = (-j01 * ref_grad[a][0] + j00 * ref_grad[a][1]) / det;
        }
        double k00 = t00, k01 = t01, k11 = t11;
        if (oscillatory) {
          double f = 0.0;
          for (int a = 0; a < 3; ++a) f += coefficient(tri[a][0], tri[a][1], k_big);
          f /= 3.0;
          k00 = f;
          k01 = 0.0;
          k11 = f;
        }
        const double area = std::abs(det) / 2.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) {
            const Index ga = tri[a][0] + tri[a][1] * side, gb = tri[b][0] + tri[b][1] * side;
            full(ga, gb) += area * (g[a][0] * (k00 * g[b][0] + k01 * g[b][1]) +
                                    g[a][1] * (k01 * g[b][0] + k11 * g[b][1]));
          }
      }
    }
  std::vector<Index> interior;
  for (Index jj = 1; jj < n; ++jj)
    for (Index ii = 1; ii < n; ++ii) interior.push_back(ii + jj * side);
  DenseMatrix a(interior.size(), interior.size());
  for (Index p = 0; p < interior.size(); ++p)
    for (Index q = 0; q < interior.size(); ++q) a(p, q) = full(interior[p], interior[q]);
  return a;
}

double rel_diff(const DenseMatrix& a, const DenseMatrix& b) {
  return oracle::max_abs_diff(a, b) / max_abs(b);
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("isotropic stencil is the five-point Laplacian") {
  for (double theta : {0.0, 3.0 * std::numbers::pi / 16.0, 1.0}) {
    ProblemSpec s;
    s.n = 8;
    s.epsilon = 1.0;
    s.theta = theta;
    Problem p = assemble(s);
    // interior unknown (3,3) in 1-based mesh numbering -> local (2,2)
    const Index m = s.n - 1, r = 2 + 2 * m;
    CHECK(p.matrix.at(r, r) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(p.matrix.at(r, r - 1) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(p.matrix.at(r, r + 1) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(p.matrix.at(r, r - m) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(p.matrix.at(r, r + m) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(p.matrix.row_cols(r).size() == 5);
  }
}

TEST_CASE("pure diffusion rows sum to zero before elimination") {
  ProblemSpec s;
  s.n = 6;
  SparseMatrix full = assemble_stiffness_full(s);
  const Index side = s.n + 1;
  for (Index j = 1; j < s.n; ++j)
    for (Index i = 1; i < s.n; ++i) {
      double sum = 0.0;
      for (double v : full.row_vals(i + j * side)) sum += v;
      CHECK(std::abs(sum) < 1e-13);
    }
}

TEST_CASE("epsilon zero, theta zero couples only along x") {
  ProblemSpec s;
  s.n = 6;
  s.epsilon = 0.0;
  s.theta = 0.0;
  Problem p = assemble(s);
  const Index m = s.n - 1, r = 2 + 2 * m;
  CHECK(p.matrix.at(r, r) == doctest::Approx(2.0));
  CHECK(p.matrix.at(r, r - 1) == doctest::Approx(-1.0));
  CHECK(p.matrix.at(r, r + 1) == doctest::Approx(-1.0));
  CHECK(p.matrix.row_cols(r).size() == 3);
}

TEST_CASE("oscillatory with K=1 matches isotropic") {
  ProblemSpec iso;
  iso.n = 7;
  iso.theta = 0.0;
  ProblemSpec osc = iso;
  osc.kind = ProblemKind::oscillatory;
  osc.K = 1.0;
  CHECK(oracle::max_abs_diff(assemble(iso).matrix.to_dense(), assemble(osc).matrix.to_dense()) <
        1e-14);
}

TEST_CASE("oscillatory SPD and independent assembly") {
  for (double k : {1e-2, 10.0, 1e3, 1e6}) {
    ProblemSpec s;
    s.kind = ProblemKind::oscillatory;
    s.n = 8;
    s.K = k;
    DenseMatrix a = assemble(s).matrix.to_dense();
    CHECK(dense_sym_eig(a).values.front() > 0.0);
  }
  ProblemSpec s;
  s.kind = ProblemKind::oscillatory;
  s.n = 4;
  s.K = 1e3;
  CHECK(rel_diff(assemble(s).matrix.to_dense(), naive_assembly(4, 1e3, true)) <= 1e-12);
}

TEST_CASE("anisotropic matches independent assembly") {
  ProblemSpec s;
  s.n = 6;
  s.epsilon = 0.001;
  CHECK(rel_diff(assemble(s).matrix.to_dense(),
                 naive_assembly(6, 1.0, false, 0.001, s.theta)) <= 1e-12);
}

TEST_CASE("symmetry, definiteness and growth") {
  for (double eps : {0.0, 0.001, 0.5, 1.0}) {
    ProblemSpec s;
    s.n = 4;
    s.epsilon = eps;
    Problem p = assemble(s);
    CHECK(is_symmetric(p.matrix, 1e-13));
    CHECK(dense_sym_eig(p.matrix.to_dense()).values.front() > 0.0);
    CHECK(p.matrix.nrows() == 9);
    CHECK(p.dof_coords.size() == 9);
  }
  for (Index m : {16, 32}) {
    ProblemSpec a, b;
    a.n = m;
    b.n = 2 * m;
    const double ratio = static_cast<double>(assemble(b).matrix.nnz()) /
                         static_cast<double>(assemble(a).matrix.nnz());
    CHECK(std::abs(ratio - 4.0) <= 0.4);
  }
}

TEST_CASE("spec validation") {
  ProblemSpec s;
  s.n = 1;
  CHECK_THROWS_AS(assemble(s), ConfigError);
  s.n = 4;
  s.epsilon = 1.5;
  CHECK_THROWS_AS(assemble(s), ConfigError);
  s.epsilon = 1.0;
  s.kind = ProblemKind::oscillatory;
  s.K = 0.0;
  CHECK_THROWS_AS(assemble(s), ConfigError);
  CHECK_THROWS_AS(problem_kind_from_string("helmholtz"), ConfigError);
  CHECK(problem_kind_from_string("oscillatory") == ProblemKind::oscillatory);
}

}  // TEST_SUITE
