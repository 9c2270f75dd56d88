#include "emin/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "emin/error.hpp"

namespace emin {

double convergence_factor(const std::vector<double>& residuals, Index window) {
  if (window < 1 || residuals.size() < window + 2)
    throw DimensionError("convergence_factor: residual history too short");
  double log_sum = 0.0;
  const Index last = residuals.size() - 1;
  for (Index k = last - window + 1; k <= last; ++k) {
    const double prev = residuals[k - 1];
    const double cur = residuals[k];
    if (prev == 0.0) return 0.0;
    if (cur == 0.0) return 0.0;
    log_sum += std::log(cur / prev);
  }
  return std::exp(log_sum / static_cast<double>(window));
}

double work_per_digit(double cc, double cf) {
  if (!(cf > 0.0 && cf < 1.0)) return std::numeric_limits<double>::infinity();
  return -cc / std::log10(cf);
}

ConvergenceReport convergence_report(const Hierarchy& h, const std::vector<double>& residuals) {
  ConvergenceReport rep;
  rep.cf = convergence_factor(residuals);
  rep.oc = h.operator_complexity();
  rep.cc = h.cycle_complexity();
  rep.wpd = work_per_digit(rep.cc, rep.cf);
  rep.iterations = residuals.size() - 1;
  rep.converged = std::isfinite(rep.cf) && rep.cf < 1.0;
  return rep;
}

std::vector<double> cf_residual_history(const Hierarchy& h, std::uint64_t seed, Index iterations) {
  const SparseMatrix& a = h.level(0).a;
  Rng rng(seed);
  Vector x = rng.uniform_vector(a.nrows());
  const Vector b(a.nrows(), 0.0);
  std::vector<double> hist;
  hist.reserve(iterations + 1);
  hist.push_back(norm2(spmv(a, x)));
  for (Index it = 0; it < iterations; ++it) {
    x = vcycle(h, 0, x, b);
    hist.push_back(norm2(spmv(a, x)));
  }
  return hist;
}

ConvergenceReport measure_convergence(const Hierarchy& h, std::uint64_t seed) {
  return convergence_report(h, cf_residual_history(h, seed));
}

Vector next_candidate(const SparseMatrix& a, const Hierarchy* existing, Index k,
                      Index improvement_iters, Rng& rng, const Relaxation& jacobi) {
  if (k < 1) throw ConfigError("next_candidate: vectors are numbered from 1");
  if (k >= 2 && existing == nullptr)
    throw ConfigError("next_candidate: vector " + std::to_string(k) +
                      " needs a hierarchy built from the previous vectors");
  Vector v = rng.uniform_vector(a.nrows());
  const Vector zero(a.nrows(), 0.0);
  if (k == 1) {
    Relaxation rel = jacobi;
    rel.kind = RelaxationKind::jacobi;
    rel.sweeps = 1;
    for (Index it = 0; it < improvement_iters; ++it) relax_in_place(rel, a, v, zero);
  } else {
    for (Index it = 0; it < improvement_iters; ++it) v = vcycle(*existing, 0, v, zero);
  }
  const double nv = norm2(v);
  if (!(nv > 0.0) || !std::isfinite(nv))
    throw DependentVectorError("next_candidate: improvement drove the vector to zero");
  for (double& x : v) x /= nv;
  return v;
}

CandidateSet adaptive_constraints(const SparseMatrix& a, const Hierarchy* existing, Index n_vecs,
                                  Index improvement_iters, std::uint64_t seed,
                                  const SetupConfig& cfg) {
  if (n_vecs < 1) throw ConfigError("adaptive_constraints: n_vecs must be at least 1");
  Rng rng(seed);
  CandidateSet out{DenseMatrix(a.nrows(), n_vecs)};
  std::optional<Hierarchy> built;
  Relaxation improve = cfg.relaxation;
  if (cfg.scale_omega) improve.omega /= jacobi_spectral_radius(a);
  for (Index k = 1; k <= n_vecs; ++k) {
    const Hierarchy* h = nullptr;
    if (k >= 2) {
      if (k == 2 && existing != nullptr) {
        h = existing;
      } else {
        SetupConfig c = cfg;
        DenseMatrix prev(a.nrows(), k - 1);
        for (Index j = 0; j + 1 < k; ++j) prev.set_column(j, out.vectors.column(j));
        c.candidates = std::move(prev);
        built.emplace(setup(a, c));
        h = &*built;
      }
    }
    out.vectors.set_column(k - 1, next_candidate(a, h, k, improvement_iters, rng, improve));
  }
  return out;
}

// --- configuration ---------------------------------------------------------

void ExperimentConfig::validate() const {
  problem.validate();
  if (taus.empty() && !constrained) throw ConfigError("experiment: empty mode grid");
  if (emin_iters.empty()) throw ConfigError("experiment: empty emin_iters grid");
  for (double t : taus)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("experiment: tau must lie in [0,1]");
  if (pattern_degree < 1) throw ConfigError("experiment: pattern_degree must be at least 1");
  if (n_constraint_vectors < 1)
    throw ConfigError("experiment: n_constraint_vectors must be at least 1");
  if (candidates == CandidateSource::constant && n_constraint_vectors != 1)
    throw ConfigError("experiment: the constant candidate source provides one vector");
  if (max_levels < 1 || max_coarse < 1) throw ConfigError("experiment: bad level limits");
}

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

Index get_count(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(std::string("config: '") + key + "' must be a nonnegative integer");
  return static_cast<Index>(v.get<long long>());
}

double get_real(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j,
             {"problem", "taus", "constrained", "emin_iters", "pattern_degree",
              "n_constraint_vectors", "improvement_iters", "candidates", "precondition",
              "max_levels", "max_coarse", "seed", "output"},
             "config");
  ExperimentConfig cfg;
  try {
    if (j.contains("problem")) {
      const json& p = j["problem"];
      check_keys(p, {"kind", "n", "epsilon", "theta", "K"}, "config.problem");
      if (p.contains("kind")) {
        if (!p["kind"].is_string()) throw ConfigError("config.problem: 'kind' must be a string");
        cfg.problem.kind = problem_kind_from_string(p["kind"].get<std::string>());
      }
      if (p.contains("n")) cfg.problem.n = get_count(p, "n");
      if (p.contains("epsilon")) cfg.problem.epsilon = get_real(p, "epsilon");
      if (p.contains("theta")) cfg.problem.theta = get_real(p, "theta");
      if (p.contains("K")) cfg.problem.K = get_real(p, "K");
    }
    if (j.contains("taus")) {
      if (!j["taus"].is_array()) throw ConfigError("config: 'taus' must be an array");
      cfg.taus.clear();
      for (const json& t : j["taus"]) {
        if (!t.is_number()) throw ConfigError("config: 'taus' entries must be numbers");
        cfg.taus.push_back(t.get<double>());
      }
    }
    if (j.contains("constrained")) {
      if (!j["constrained"].is_boolean()) throw ConfigError("config: 'constrained' must be a boolean");
      cfg.constrained = j["constrained"].get<bool>();
    }
    if (j.contains("emin_iters")) {
      if (!j["emin_iters"].is_array()) throw ConfigError("config: 'emin_iters' must be an array");
      cfg.emin_iters.clear();
      for (const json& t : j["emin_iters"]) {
        if (!t.is_number_integer() || t.get<long long>() < 0)
          throw ConfigError("config: 'emin_iters' entries must be nonnegative integers");
        cfg.emin_iters.push_back(static_cast<Index>(t.get<long long>()));
      }
    }
    if (j.contains("pattern_degree")) cfg.pattern_degree = get_count(j, "pattern_degree");
    if (j.contains("n_constraint_vectors"))
      cfg.n_constraint_vectors = get_count(j, "n_constraint_vectors");
    if (j.contains("improvement_iters")) cfg.improvement_iters = get_count(j, "improvement_iters");
    if (j.contains("candidates")) {
      const json& c = j["candidates"];
      if (c == "constant") cfg.candidates = CandidateSource::constant;
      else if (c == "adaptive") cfg.candidates = CandidateSource::adaptive;
      else throw ConfigError("config: 'candidates' must be \"constant\" or \"adaptive\"");
    }
    if (j.contains("precondition")) {
      if (!j["precondition"].is_boolean())
        throw ConfigError("config: 'precondition' must be a boolean");
      cfg.precondition = j["precondition"].get<bool>();
    }
    if (j.contains("max_levels")) cfg.max_levels = get_count(j, "max_levels");
    if (j.contains("max_coarse")) cfg.max_coarse = get_count(j, "max_coarse");
    if (j.contains("seed")) cfg.seed = get_count(j, "seed");
    if (j.contains("output")) {
      if (!j["output"].is_string()) throw ConfigError("config: 'output' must be a string");
      cfg.output = j["output"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

// --- running ---------------------------------------------------------------

const char* const kCsvHeader =
    "problem,n,epsilon,theta,K,mode,tau,pattern_degree,emin_iters,n_vecs,imp_iters,seed,levels,"
    "oc,cc,cf,wpd,converged";

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct GridPoint {
  bool constrained = true;
  double tau = 0.0;
  Index iters = 0;
};

std::vector<GridPoint> grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> pts;
  for (double t : cfg.taus)
    for (Index it : cfg.emin_iters) pts.push_back({false, t, it});
  if (cfg.constrained)
    for (Index it : cfg.emin_iters) pts.push_back({true, 1.0, it});
  return pts;
}

ExperimentRow run_point(const ExperimentConfig& cfg, const SparseMatrix& a, const GridPoint& g) {
  SetupConfig sc;
  sc.mode = g.constrained ? EminMode::constrained : EminMode::weighted;
  sc.tau = g.tau;
  sc.pattern_degree = cfg.pattern_degree;
  sc.emin_iters = g.iters;
  sc.max_levels = cfg.max_levels;
  sc.max_coarse = cfg.max_coarse;
  sc.precondition = cfg.precondition;
  if (cfg.candidates == CandidateSource::adaptive)
    sc.candidates = adaptive_constraints(a, nullptr, cfg.n_constraint_vectors,
                                         cfg.improvement_iters, cfg.seed, sc)
                        .vectors;

  ExperimentRow row;
  row.mode = to_string(sc.mode);
  row.tau = g.tau;
  row.emin_iters = g.iters;
  try {
    const Hierarchy h = setup(a, sc);
    row.levels = h.num_levels();
    row.report = measure_convergence(h, cfg.seed);
  } catch (const BreakdownError&) {
    row.report.cf = std::numeric_limits<double>::infinity();
    row.report.wpd = std::numeric_limits<double>::infinity();
    row.report.converged = false;
  }
  return row;
}

void write_meta(const ExperimentConfig& cfg, const std::string& path) {
  nlohmann::ordered_json meta;
  meta["cf"] = "geometric mean of the last 10 residual ratios over 30 stationary V(2,2) cycles, "
               "b = 0, random initial vector from the config seed";
  meta["cc"] = "sum over levels of (pre sweeps + post sweeps + 1) * nnz(A_l) / nnz(A_0)";
  meta["oc"] = "sum over levels of nnz(A_l) / nnz(A_0)";
  meta["wpd"] = "-cc / log10(cf); inf when cf >= 1";
  meta["emin_iters"] = "minimization iterations after the constraint-satisfying initial guess";
  meta["relaxation"] = "Jacobi, omega (4/3)/rho(D^-1 A) per level, 2 pre and 2 post sweeps";
  meta["seed"] = cfg.seed;
  meta["candidates"] = cfg.candidates == CandidateSource::constant ? "constant" : "adaptive";
  meta["precondition"] = cfg.precondition;
  meta["max_levels"] = cfg.max_levels;
  meta["max_coarse"] = cfg.max_coarse;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << meta.dump(2) << '\n';
}

} // namespace

std::string format_csv_row(const ExperimentConfig& cfg, const ExperimentRow& row) {
  const bool weighted = row.mode == "weighted";
  std::string s;
  s += to_string(cfg.problem.kind) + ',';
  s += std::to_string(cfg.problem.n) + ',';
  s += num(cfg.problem.epsilon) + ',';
  s += num(cfg.problem.theta) + ',';
  s += num(cfg.problem.K) + ',';
  s += row.mode + ',';
  s += (weighted ? num(row.tau) : std::string()) + ',';
  s += std::to_string(cfg.pattern_degree) + ',';
  s += std::to_string(row.emin_iters) + ',';
  s += std::to_string(cfg.n_constraint_vectors) + ',';
  s += std::to_string(cfg.improvement_iters) + ',';
  s += std::to_string(cfg.seed) + ',';
  s += std::to_string(row.levels) + ',';
  s += num(row.report.oc) + ',';
  s += num(row.report.cc) + ',';
  s += num(row.report.cf) + ',';
  s += num(row.report.wpd) + ',';
  s += row.report.converged ? "true" : "false";
  return s;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  std::ofstream csv;
  if (!cfg.output.empty()) {
    csv.open(cfg.output);
    if (!csv) throw ConfigError("cannot write '" + cfg.output + "'");
  }
  const Problem problem = assemble(cfg.problem);
  const std::vector<GridPoint> pts = grid(cfg);
  std::vector<ExperimentRow> rows(pts.size());

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pts.size())));
  if (threads == 1) {
    for (Index k = 0; k < pts.size(); ++k) rows[k] = run_point(cfg, problem.matrix, pts[k]);
  } else {
    std::atomic<Index> next{0};
    std::vector<std::exception_ptr> errors(pts.size());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (Index k = next++; k < pts.size(); k = next++) {
          try {
            rows[k] = run_point(cfg, problem.matrix, pts[k]);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  if (!cfg.output.empty()) {
    csv << kCsvHeader << '\n';
    for (const ExperimentRow& r : rows) csv << format_csv_row(cfg, r) << '\n';
    write_meta(cfg, cfg.output + ".meta.json");
  }
  return rows;
}

} // namespace emin
