#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "emin/coarsening.hpp"
#include "emin/dense.hpp"
#include "emin/energymin.hpp"
#include "emin/smoothing.hpp"
#include "emin/sparse.hpp"

namespace emin {

enum class EminMode { weighted, constrained };

const char* to_string(EminMode mode) noexcept;
EminMode emin_mode_from_string(const std::string& s);

struct SetupConfig {
  EminMode mode = EminMode::constrained;
  double tau = 1.0;
  SpectralEquivalence equivalence;
  Index pattern_degree = 2;
  Index emin_iters = 10;
  double emin_tol = 0.0;  // 0 runs exactly emin_iters iterations
  double theta_strength = 0.25;
  Index max_coarse = 100;
  Index max_levels = 20;
  Relaxation relaxation{RelaxationKind::jacobi, 4.0 / 3.0, 2};
  // Jacobi weight on each level becomes relaxation.omega / rho(D^{-1} A).
  bool scale_omega = true;
  bool precondition = true;
  // Raw candidate vectors (n x n_B); the constant vector when absent.
  std::optional<DenseMatrix> candidates;

  void validate() const;
};

struct Level {
  SparseMatrix a;
  SparseMatrix p;   // empty (0 x 0) on the coarsest level
  SparseMatrix pt;  // transpose of p, used for restriction
  BlockSplit split;
  Relaxation relaxation;
  CandidateSet candidates;
  std::vector<double> emin_residual_history;
  std::vector<double> constraint_violation_history;
};

class Hierarchy {
public:
  Hierarchy(std::vector<Level> levels, SetupConfig config);

  Index num_levels() const noexcept { return levels_.size(); }
  const Level& level(Index k) const { return levels_.at(k); }
  const std::vector<Level>& levels() const noexcept { return levels_; }
  const SetupConfig& config() const noexcept { return config_; }
  // Dense Cholesky factor of the coarsest matrix.
  const DenseMatrix& coarsest_factor() const noexcept { return coarsest_factor_; }

  double operator_complexity() const;
  // Sum over levels of (pre + post + 1) nnz(A_l) / nnz(A_0).
  double cycle_complexity() const;

private:
  std::vector<Level> levels_;
  SetupConfig config_;
  DenseMatrix coarsest_factor_;
};

// P^T A P, symmetrized by averaging when A is symmetric.
SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a);

// Throws StagnationError when the splitting keeps every point coarse
// after two retries with a raised strength threshold.
Hierarchy setup(const SparseMatrix& a, const SetupConfig& cfg);

// One V-cycle on `level` with initial guess x; returns the new iterate.
Vector vcycle(const Hierarchy& h, Index level, std::span<const double> x,
              std::span<const double> b);

enum class Acceleration { stationary, cg };

struct SolveResult {
  Vector x;
  std::vector<double> residual_history;
  Index iterations = 0;
  bool converged = false;
  bool diverged = false;  // residual grew for 10 consecutive iterations
};

SolveResult solve(const Hierarchy& h, std::span<const double> b, double tol, Index max_iters,
                  Acceleration accel = Acceleration::stationary,
                  std::optional<Vector> x0 = std::nullopt);

// Largest A-norm contraction of the V-cycle error propagator, estimated by
// power iteration with A-Rayleigh quotients from a seeded random start.
double measure_contraction(const Hierarchy& h, Index iters = 200, std::uint64_t seed = 1);

} // namespace emin
