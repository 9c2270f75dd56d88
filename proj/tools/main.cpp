// emin: command-line front end for the library.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 solver divergence.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "emin/error.hpp"
#include "emin/experiments.hpp"
#include "emin/matrix_market.hpp"
#include "emin/sylvester.hpp"
#include "emin/theory.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfig = 2;
constexpr int kDiverged = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  std::optional<double> tau;
  std::optional<std::size_t> iters;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON experiment configuration");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--out", c.out, "output path");
  cmd->add_option("--mode", c.mode, "weighted or constrained")
      ->check(CLI::IsMember({"weighted", "constrained"}));
  cmd->add_option("--tau", c.tau, "weighted-mode tau in [0,1]");
  cmd->add_option("--iters", c.iters, "energy-minimization iterations");
}

emin::ExperimentConfig resolve(const Common& c) {
  emin::ExperimentConfig cfg;
  if (!c.config.empty()) cfg = emin::load_experiment_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.output = c.out;
  if (c.mode == "constrained") {
    cfg.taus.clear();
    cfg.constrained = true;
  } else if (c.mode == "weighted") {
    cfg.constrained = false;
    if (cfg.taus.empty()) cfg.taus = {1.0};
  }
  if (c.tau) {
    cfg.taus = {*c.tau};
    if (c.mode.empty()) cfg.constrained = false;
  }
  if (c.iters) cfg.emin_iters = {*c.iters};
  cfg.validate();
  return cfg;
}

emin::SetupConfig setup_config(const emin::ExperimentConfig& cfg) {
  emin::SetupConfig sc;
  sc.mode = cfg.constrained && cfg.taus.empty() ? emin::EminMode::constrained
                                                : emin::EminMode::weighted;
  if (sc.mode == emin::EminMode::weighted) sc.tau = cfg.taus.front();
  sc.pattern_degree = cfg.pattern_degree;
  sc.emin_iters = cfg.emin_iters.front();
  sc.max_levels = cfg.max_levels;
  sc.max_coarse = cfg.max_coarse;
  sc.precondition = cfg.precondition;
  return sc;
}

void print_report(const emin::Hierarchy& h, const emin::ConvergenceReport& r) {
  std::printf("levels      %zu\n", h.num_levels());
  for (std::size_t k = 0; k < h.num_levels(); ++k)
    std::printf("  level %zu   rows %zu  nnz %zu\n", k, h.level(k).a.nrows(), h.level(k).a.nnz());
  std::printf("oc          %.4f\n", r.oc);
  std::printf("cc          %.4f\n", r.cc);
  std::printf("cf          %.4f\n", r.cf);
  std::printf("wpd         %.4f\n", r.wpd);
  std::printf("converged   %s\n", r.converged ? "yes" : "no");
}

int cmd_assemble(const Common& c, const emin::ProblemSpec& overrides, bool use_overrides) {
  emin::ExperimentConfig cfg = resolve(c);
  emin::ProblemSpec spec = use_overrides ? overrides : cfg.problem;
  const emin::Problem p = emin::assemble(spec);
  if (cfg.output.empty()) {
    emin::write_matrix_market(std::cout, p.matrix, emin::MatrixMarketSymmetry::symmetric);
  } else {
    emin::write_matrix_market(cfg.output, p.matrix, emin::MatrixMarketSymmetry::symmetric);
  }
  return kOk;
}

int cmd_solve(const Common& c, const std::string& matrix_path) {
  const emin::ExperimentConfig cfg = resolve(c);
  const emin::SparseMatrix a = matrix_path.empty() ? emin::assemble(cfg.problem).matrix
                                                   : emin::read_matrix_market(matrix_path);
  emin::SetupConfig sc = setup_config(cfg);
  if (cfg.candidates == emin::CandidateSource::adaptive)
    sc.candidates = emin::adaptive_constraints(a, nullptr, cfg.n_constraint_vectors,
                                               cfg.improvement_iters, cfg.seed, sc)
                        .vectors;
  const emin::Hierarchy h = emin::setup(a, sc);
  const emin::ConvergenceReport r = emin::measure_convergence(h, cfg.seed);
  print_report(h, r);
  return r.converged ? kOk : kDiverged;
}

int cmd_sweep(const Common& c, unsigned jobs) {
  const emin::ExperimentConfig cfg = resolve(c);
  const auto rows = emin::run_experiment(cfg, jobs);
  if (cfg.output.empty()) {
    std::cout << emin::kCsvHeader << '\n';
    for (const auto& r : rows) std::cout << emin::format_csv_row(cfg, r) << '\n';
  } else {
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), cfg.output.c_str());
  }
  return kOk;
}

int cmd_theory(const Common& c, const std::string& matrix_path) {
  const emin::ExperimentConfig cfg = resolve(c);
  const emin::SparseMatrix a = emin::read_matrix_market(matrix_path);
  if (a.nrows() > 500) throw emin::ConfigError("theory: dense diagnostics are limited to n <= 500");
  const emin::StrengthGraph g = emin::strength_graph(a);
  const emin::BlockSplit split = emin::cf_split(g);
  if (split.n_fine() == 0) throw emin::ConfigError("theory: the splitting has no F-points");
  auto pattern = std::make_shared<const emin::SparsityPattern>(
      emin::pattern_distance_k(g, split, cfg.pattern_degree));
  const emin::CandidateSet cs = emin::prepare_candidates(a, emin::DenseMatrix(a.nrows(), 1, 1.0));
  const emin::Interpolation interp =
      emin::constrained_energymin(a, split, cs, pattern, cfg.emin_iters.front());

  // P rows in CF ordering.
  const emin::DenseMatrix pd = interp.p.to_dense();
  const auto order = split.cf_order();
  emin::DenseMatrix p(pd.nrows(), pd.ncols());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = 0; j < pd.ncols(); ++j) p(i, j) = pd(order[i], j);

  const emin::DenseMatrix ad = a.to_dense();
  const emin::DenseMatrix m =
      emin::relaxation_matrix({emin::RelaxationKind::jacobi, 1.0, 1}, ad);
  const emin::TheoryReport r = emin::theory_report(ad, m, {}, split, p);
  std::printf("n           %zu (coarse %zu)\n", a.nrows(), split.n_coarse());
  std::printf("etg_norm    %.10g\n", r.etg_norm);
  std::printf("ktg         %.10g\n", r.ktg);
  std::printf("1-1/ktg     %.10g\n", 1.0 - 1.0 / r.ktg);
  std::printf("kappa_s     %.10g\n", r.kappa_s);
  std::printf("c2_meas     %.10g\n", r.c2_meas);
  std::printf("pr_energy   %.10g\n", r.pr_energy);
  std::printf("trace_schur %.10g\n", r.trace_schur);
  std::printf("trace_plain %.10g\n", r.trace_plain);
  std::printf("beta_wap    %.10g\n", r.beta_wap);
  std::printf("beta_sap    %.10g\n", r.beta_sap);
  return kOk;
}

emin::DenseMatrix load_dense(const std::string& path) {
  return emin::read_matrix_market(path).to_dense();
}

int cmd_sylvester(const std::string& pa, const std::string& pb, const std::string& pc,
                  const std::string& pd, const std::string& pf, double tol, std::size_t max_iters,
                  const std::string& out) {
  emin::MatrixEquation eq;
  eq.a = load_dense(pa);
  eq.b = load_dense(pb);
  eq.c = load_dense(pc);
  eq.d = load_dense(pd);
  eq.f = pf.empty() ? emin::DenseMatrix(eq.a.nrows(), eq.b.nrows(), 1.0) : load_dense(pf);
  const emin::SylvesterResult r = emin::sylvester_cg(eq, max_iters, tol);
  std::printf("iterations  %zu\n", r.iterations);
  std::printf("residual    %.6e\n", r.residual_history.back());
  std::printf("converged   %s\n", r.converged ? "yes" : "no");
  if (!out.empty()) emin::write_matrix_market(out, emin::SparseMatrix::from_dense(r.w));
  return r.converged ? kOk : kDiverged;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-minimization AMG experiments"};
  app.require_subcommand(1);

  Common common;
  unsigned jobs = 1;
  std::string matrix_path;
  emin::ProblemSpec problem;
  std::string problem_kind = "anisotropic";
  bool problem_given = false;

  auto* assemble = app.add_subcommand("assemble", "write a model problem as Matrix Market");
  add_common(assemble, common);
  assemble->add_option("--problem", problem_kind, "anisotropic or oscillatory");
  assemble->add_option("--n", problem.n, "mesh intervals per side");
  assemble->add_option("--epsilon", problem.epsilon, "anisotropy ratio");
  assemble->add_option("--theta", problem.theta, "rotation angle");
  assemble->add_option("--K", problem.K, "oscillation magnitude");

  auto* solve = app.add_subcommand("solve", "build one hierarchy and report CF/OC/CC/WPD");
  add_common(solve, common);
  solve->add_option("--matrix", matrix_path, "Matrix Market input instead of the config problem");

  auto* sweep = app.add_subcommand("sweep", "run an experiment grid and write CSV");
  add_common(sweep, common);
  sweep->add_option("--jobs", jobs, "worker threads");

  auto* theory = app.add_subcommand("theory", "dense two-grid diagnostics for a small matrix");
  add_common(theory, common);
  theory->add_option("matrix", matrix_path, "Matrix Market input")->required();

  std::string sa, sb, sc, sd, sf, sout;
  double tol = 1e-10;
  std::size_t max_iters = 1000;
  auto* sylv = app.add_subcommand("sylvester", "solve A W B + C W D = F by preconditioned CG");
  sylv->add_option("A", sa)->required();
  sylv->add_option("B", sb)->required();
  sylv->add_option("C", sc)->required();
  sylv->add_option("D", sd)->required();
  sylv->add_option("--rhs", sf, "F (default: all ones)");
  sylv->add_option("--tol", tol);
  sylv->add_option("--max-iters", max_iters);
  sylv->add_option("--out", sout, "write W as Matrix Market");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*assemble) {
      problem_given = assemble->count("--problem") + assemble->count("--n") +
                          assemble->count("--epsilon") + assemble->count("--theta") +
                          assemble->count("--K") >
                      0;
      if (problem_given) {
        emin::ProblemSpec base = common.config.empty() ? emin::ProblemSpec{}
                                                       : emin::load_experiment_config(common.config).problem;
        if (assemble->count("--problem")) base.kind = emin::problem_kind_from_string(problem_kind);
        if (assemble->count("--n")) base.n = problem.n;
        if (assemble->count("--epsilon")) base.epsilon = problem.epsilon;
        if (assemble->count("--theta")) base.theta = problem.theta;
        if (assemble->count("--K")) base.K = problem.K;
        base.validate();
        problem = base;
      }
      return cmd_assemble(common, problem, problem_given);
    }
    if (*solve) return cmd_solve(common, matrix_path);
    if (*sweep) return cmd_sweep(common, jobs == 0 ? std::thread::hardware_concurrency() : jobs);
    if (*theory) return cmd_theory(common, matrix_path);
    if (*sylv) return cmd_sylvester(sa, sb, sc, sd, sf, tol, max_iters, sout);
  } catch (const emin::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const emin::BreakdownError& e) {
    std::fprintf(stderr, "solver breakdown: %s\n", e.what());
    return kDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}
