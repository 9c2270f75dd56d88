#include <doctest.h>

#include <set>

#include "emin/coarsening.hpp"
#include "emin/error.hpp"
#include "emin/problems.hpp"
#include "oracles.hpp"

using namespace emin;

namespace {

std::set<std::pair<Index, Index>> edges(const StrengthGraph& s) {
  std::set<std::pair<Index, Index>> e;
  for (Index i = 0; i < s.size(); ++i)
    for (Index j : s.adjacency.row_cols(i)) e.insert({i, j});
  return e;
}

SparseMatrix complete_graph_matrix(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) t.push_back({i, j, i == j ? 4.0 : -1.0});
  return csr_from_triplets(t, n, n);
}

}  // namespace

TEST_SUITE("coarsening") {

TEST_CASE("strength thresholds") {
  Rng rng(1);
  DenseMatrix d = oracle::random_spd(8, rng);
  SparseMatrix a = SparseMatrix::from_dense(d);
  auto all = edges(strength_graph(a, 0.0));
  CHECK(all.size() == 8 * 7);

  auto strict = edges(strength_graph(a, 1.0));
  for (Index i = 0; i < 8; ++i) {
    double best = 0.0;
    Index arg = 0;
    for (Index j = 0; j < 8; ++j) {
      if (j == i) continue;
      const double r = std::abs(d(i, j)) / std::sqrt(d(i, i) * d(j, j));
      if (r > best) best = r, arg = j;
    }
    CHECK(strict.count({i, arg}) == 1);
    CHECK(strict.count({arg, i}) == 1);
  }
  // every kept edge is some row's maximum
  for (auto [i, j] : strict) {
    auto is_row_max = [&](Index r, Index c) {
      const double v = std::abs(d(r, c)) / std::sqrt(d(r, r) * d(c, c));
      for (Index k = 0; k < 8; ++k)
        if (k != r && std::abs(d(r, k)) / std::sqrt(d(r, r) * d(k, k)) > v) return false;
      return true;
    };
    CHECK((is_row_max(i, j) || is_row_max(j, i)));
  }
  CHECK_THROWS_AS(strength_graph(a, 1.5), ConfigError);
}

TEST_CASE("anisotropic strength only along x") {
  ProblemSpec s;
  s.n = 8;
  s.epsilon = 0.001;
  s.theta = 0.0;
  Problem p = assemble(s);
  StrengthGraph g = strength_graph(p.matrix, 0.25);
  for (Index i = 0; i < g.size(); ++i)
    for (Index j : g.adjacency.row_cols(i)) {
      CHECK(p.dof_coords[i].second == doctest::Approx(p.dof_coords[j].second));
    }
}

TEST_CASE("cf_split small cases") {
  BlockSplit s = cf_split(strength_graph(oracle::laplacian_1d(5), 0.25));
  CHECK(s.c_points() == std::vector<Index>{0, 2, 4});
  CHECK(s.f_points() == std::vector<Index>{1, 3});

  BlockSplit diag = cf_split(strength_graph(SparseMatrix::identity(4), 0.25));
  CHECK(diag.n_coarse() == 4);

  BlockSplit k4 = cf_split(strength_graph(complete_graph_matrix(4), 0.25));
  CHECK(k4.c_points() == std::vector<Index>{0});
  CHECK(k4.f_points() == std::vector<Index>{1, 2, 3});
}

TEST_CASE("cf_split determinism and coarsening ratio") {
  ProblemSpec s;
  s.n = 32;
  s.epsilon = 1.0;
  Problem p = assemble(s);
  StrengthGraph g = strength_graph(p.matrix, 0.25);
  BlockSplit a = cf_split(g), b = cf_split(g);
  CHECK(a == b);
  const double ratio = static_cast<double>(a.n_coarse()) / static_cast<double>(a.size());
  CHECK(ratio >= 0.2);
  CHECK(ratio <= 0.6);
  // every F-point has a strong C neighbour
  for (Index f : a.f_points()) {
    bool found = false;
    for (Index j : g.adjacency.row_cols(f)) found = found || a.is_coarse(j);
    CHECK(found);
  }
}

TEST_CASE("distance-k patterns") {
  StrengthGraph g = strength_graph(oracle::laplacian_1d(5), 0.25);
  BlockSplit s = cf_split(g);
  SparsityPattern p1 = pattern_distance_k(g, s, 1);
  CHECK(std::vector<Index>(p1.row(0).begin(), p1.row(0).end()) == std::vector<Index>{0, 1});
  CHECK(std::vector<Index>(p1.row(1).begin(), p1.row(1).end()) == std::vector<Index>{1, 2});

  SparsityPattern big = pattern_distance_k(g, s, 10);
  CHECK(big == SparsityPattern::full(2, 3));
  CHECK_THROWS_AS(pattern_distance_k(g, s, 0), ConfigError);

  ProblemSpec ps;
  ps.n = 10;
  ps.epsilon = 0.01;
  Problem pr = assemble(ps);
  StrengthGraph g2 = strength_graph(pr.matrix, 0.25);
  BlockSplit s2 = cf_split(g2);
  SparsityPattern prev = pattern_distance_k(g2, s2, 1);
  for (Index k = 2; k <= 5; ++k) {
    SparsityPattern next = pattern_distance_k(g2, s2, k);
    CHECK(prev.subset_of(next));
    prev = next;
  }
}

TEST_CASE("disconnected F-point yields an empty, flagged row") {
  // 0 - 1 strongly coupled, 2 - 3 strongly coupled; force 2 and 3 both F.
  std::vector<Triplet> t{{0, 0, 2}, {1, 1, 2}, {2, 2, 2}, {3, 3, 2},
                         {0, 1, -1}, {1, 0, -1}, {2, 3, -1}, {3, 2, -1}};
  SparseMatrix a = csr_from_triplets(t, 4, 4);
  StrengthGraph g = strength_graph(a, 0.25);
  BlockSplit s({PointType::coarse, PointType::fine, PointType::fine, PointType::fine});
  SparsityPattern p = pattern_distance_k(g, s, 3);
  CHECK(p.empty_rows() == std::vector<Index>{1, 2});
}

TEST_CASE("block view and CF ordering") {
  Rng rng(3);
  DenseMatrix d = oracle::random_spd(7, rng);
  BlockSplit s = oracle::random_split(7, 3, rng);
  BlockView v = block_view(SparseMatrix::from_dense(d), s);
  DenseMatrix cf = to_cf_ordering(d, s);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) CHECK(v.ff.at(i, j) == cf(i, j));
    for (Index j = 0; j < 3; ++j) CHECK(v.fc.at(i, j) == cf(i, 4 + j));
  }
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(v.cc.at(i, j) == cf(4 + i, 4 + j));
  DenseMatrix r = injection_r(s);
  CHECK(r(0, 4) == 1.0);
  CHECK(injection_s(s)(3, 3) == 1.0);
}

}  // TEST_SUITE
