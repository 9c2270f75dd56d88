#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emin/energymin.hpp"
#include "emin/hierarchy.hpp"
#include "emin/problems.hpp"
#include "emin/random.hpp"

namespace emin {

struct ConvergenceReport {
  double cf = 0.0;
  double oc = 1.0;
  double cc = 1.0;
  double wpd = 0.0;  // +inf when cf >= 1 or cf == 0
  Index iterations = 0;
  bool converged = false;
};

// Geometric mean of the last `window` residual ratios. Needs at least
// window + 2 residuals.
double convergence_factor(const std::vector<double>& residuals, Index window = 10);

// -cc / log10(cf); +inf when cf is outside (0, 1).
double work_per_digit(double cc, double cf);

ConvergenceReport convergence_report(const Hierarchy& h, const std::vector<double>& residuals);

// Stationary V-cycles on A x = 0 from a seeded random x0, recording the
// residual two-norms (iterations + 1 entries).
std::vector<double> cf_residual_history(const Hierarchy& h, std::uint64_t seed,
                                        Index iterations = 30);

// cf_residual_history followed by convergence_report.
ConvergenceReport measure_convergence(const Hierarchy& h, std::uint64_t seed);

// Candidate vector number k (1-based) for the adaptive protocol: a seeded
// random vector improved by `improvement_iters` Jacobi sweeps (k = 1) or
// V-cycles of `existing` (k >= 2) on A x = 0, scaled to unit two-norm.
// Throws ConfigError for k >= 2 without a hierarchy.
Vector next_candidate(const SparseMatrix& a, const Hierarchy* existing, Index k,
                      Index improvement_iters, Rng& rng, const Relaxation& jacobi);

// Builds n_vecs candidates; vector k >= 2 is improved with the hierarchy
// set up (with `cfg`) from vectors 1..k-1, or with `existing` for k = 2
// when given. The result is not A-orthonormalized.
CandidateSet adaptive_constraints(const SparseMatrix& a, const Hierarchy* existing, Index n_vecs,
                                  Index improvement_iters, std::uint64_t seed,
                                  const SetupConfig& cfg);

enum class CandidateSource { constant, adaptive };

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<double> taus;    // weighted-mode grid; may be empty
  bool constrained = true;     // include the constrained mode
  std::vector<Index> emin_iters{1, 5, 10};
  Index pattern_degree = 2;
  Index n_constraint_vectors = 1;
  Index improvement_iters = 0;
  CandidateSource candidates = CandidateSource::constant;
  bool precondition = true;
  Index max_levels = 20;
  Index max_coarse = 100;
  std::uint64_t seed = 0;
  std::string output;

  void validate() const;
};

// Parses the JSON form; unknown keys and wrong types raise ConfigError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentRow {
  std::string mode;
  double tau = 0.0;  // unused in constrained mode
  Index emin_iters = 0;
  Index levels = 0;
  ConvergenceReport report;
};

extern const char* const kCsvHeader;

std::string format_csv_row(const ExperimentConfig& cfg, const ExperimentRow& row);

// One row per (mode, emin_iters) grid point, weighted taus first and the
// constrained mode last. Rows are returned in grid order independent of
// `threads`. Writes the CSV and a <output>.meta.json sidecar when
// cfg.output is set.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

} // namespace emin
