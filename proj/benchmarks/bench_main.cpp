#include <benchmark/benchmark.h>

#include <memory>

#include "emin/coarsening.hpp"
#include "emin/energymin.hpp"
#include "emin/hierarchy.hpp"
#include "emin/problems.hpp"
#include "emin/random.hpp"

using namespace emin;

namespace {

SparseMatrix poisson(Index n, double eps = 1.0) {
  ProblemSpec spec;
  spec.n = n;
  spec.epsilon = eps;
  return assemble(spec).matrix;
}

struct FirstLevel {
  SparseMatrix a;
  BlockSplit split;
  CandidateSet cands;
  PatternPtr pattern;
};

FirstLevel first_level(Index n, Index degree) {
  FirstLevel f{poisson(n), {}, {}, nullptr};
  StrengthGraph g = strength_graph(f.a);
  f.split = cf_split(g);
  f.cands = prepare_candidates(f.a, DenseMatrix(f.a.nrows(), 1, 1.0));
  f.pattern = std::make_shared<const SparsityPattern>(pattern_distance_k(g, f.split, degree));
  return f;
}

void BM_spmv(benchmark::State& state) {
  const SparseMatrix a = poisson(state.range(0));
  Rng rng(1);
  const Vector x = rng.uniform_vector(a.nrows());
  Vector y(a.nrows());
  for (auto _ : state) {
    spmv_into(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}
BENCHMARK(BM_spmv)->Arg(64)->Arg(128)->Arg(256);

void BM_galerkin(benchmark::State& state) {
  FirstLevel f = first_level(state.range(0), 2);
  const PatternMatrix w = initial_guess(f.split, f.cands, f.pattern);
  const SparseMatrix p = assemble_P(w, f.split);
  for (auto _ : state) benchmark::DoNotOptimize(galerkin_product(p, f.a));
}
BENCHMARK(BM_galerkin)->Arg(64)->Arg(128);

void BM_pcg_frobenius(benchmark::State& state) {
  FirstLevel f = first_level(state.range(0), state.range(1));
  const WeightedSystem sys = build_weighted_system(f.a, f.split, f.cands, {}, 0.1, f.pattern);
  const PatternMatrix w0 = initial_guess(f.split, f.cands, f.pattern);
  for (auto _ : state) benchmark::DoNotOptimize(pcg_frobenius(sys, w0, 10, 0.0));
}
BENCHMARK(BM_pcg_frobenius)->Args({64, 2})->Args({64, 4})->Args({128, 2});

void BM_constrained(benchmark::State& state) {
  FirstLevel f = first_level(state.range(0), state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(constrained_energymin(f.a, f.split, f.cands, f.pattern, 10));
}
BENCHMARK(BM_constrained)->Args({64, 2})->Args({64, 4});

void BM_setup(benchmark::State& state) {
  const SparseMatrix a = poisson(state.range(0), 0.001);
  SetupConfig cfg;
  cfg.pattern_degree = 2;
  for (auto _ : state) benchmark::DoNotOptimize(setup(a, cfg));
}
BENCHMARK(BM_setup)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_vcycle(benchmark::State& state) {
  const SparseMatrix a = poisson(state.range(0));
  const Hierarchy h = setup(a, SetupConfig{});
  Rng rng(2);
  const Vector b = rng.uniform_vector(a.nrows());
  Vector x(a.nrows(), 0.0);
  for (auto _ : state) {
    x = vcycle(h, 0, x, b);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_vcycle)->Arg(64)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
