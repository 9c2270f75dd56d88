#include "emin/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "emin/error.hpp"
#include "emin/random.hpp"

namespace emin {

const char* to_string(EminMode mode) noexcept {
  return mode == EminMode::weighted ? "weighted" : "constrained";
}

EminMode emin_mode_from_string(const std::string& s) {
  if (s == "weighted") return EminMode::weighted;
  if (s == "constrained") return EminMode::constrained;
  throw ConfigError("unknown mode '" + s + "' (expected weighted or constrained)");
}

void SetupConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("setup: tau must lie in [0,1]");
  if (pattern_degree < 1) throw ConfigError("setup: pattern_degree must be at least 1");
  if (max_coarse < 1) throw ConfigError("setup: max_coarse must be at least 1");
  if (max_levels < 1) throw ConfigError("setup: max_levels must be at least 1");
  if (!(theta_strength >= 0.0 && theta_strength <= 1.0))
    throw ConfigError("setup: theta_strength must lie in [0,1]");
  relaxation.validate();
  equivalence.validate();
}

Hierarchy::Hierarchy(std::vector<Level> levels, SetupConfig config)
    : levels_(std::move(levels)), config_(std::move(config)) {
  if (levels_.empty()) throw ConstructionError("Hierarchy: no levels");
  coarsest_factor_ = cholesky(levels_.back().a.to_dense());
}

double Hierarchy::operator_complexity() const {
  const double base = static_cast<double>(levels_.front().a.nnz());
  double sum = 0.0;
  for (const Level& l : levels_) sum += static_cast<double>(l.a.nnz()) / base;
  return sum;
}

double Hierarchy::cycle_complexity() const {
  const double base = static_cast<double>(levels_.front().a.nnz());
  double sum = 0.0;
  for (const Level& l : levels_) {
    const double work = static_cast<double>(2 * l.relaxation.sweeps + 1);
    sum += work * static_cast<double>(l.a.nnz()) / base;
  }
  return sum;
}

SparseMatrix galerkin_product(const SparseMatrix& p, const SparseMatrix& a) {
  if (a.nrows() != a.ncols() || p.nrows() != a.nrows())
    throw DimensionError("galerkin_product: shapes do not conform");
  SparseMatrix c = multiply(p.transposed(), multiply(a, p));
  if (!is_symmetric(a)) return c;
  return add(c, c.transposed(), 0.5, 0.5);
}

namespace {

DenseMatrix constant_candidate(Index n) { return DenseMatrix(n, 1, 1.0); }

DenseMatrix inject(const CandidateSet& c, const BlockSplit& split) {
  return c.coarse_rows(split);
}

} // namespace

Hierarchy setup(const SparseMatrix& a, const SetupConfig& cfg) {
  cfg.validate();
  if (a.nrows() != a.ncols()) throw DimensionError("setup: matrix must be square");
  if (cfg.candidates && cfg.candidates->nrows() != a.nrows())
    throw DimensionError("setup: candidate length does not match the matrix");

  std::vector<Level> levels;
  SparseMatrix current = a;
  DenseMatrix raw = cfg.candidates ? *cfg.candidates : constant_candidate(a.nrows());

  while (true) {
    Level lvl;
    lvl.a = current;
    lvl.relaxation = cfg.relaxation;
    lvl.candidates = prepare_candidates(current, raw);
    const bool last = current.nrows() <= cfg.max_coarse || levels.size() + 1 >= cfg.max_levels;
    if (last) {
      lvl.split = BlockSplit::all_coarse(current.nrows());
      levels.push_back(std::move(lvl));
      break;
    }

    if (cfg.scale_omega && cfg.relaxation.kind == RelaxationKind::jacobi)
      lvl.relaxation.omega = cfg.relaxation.omega / jacobi_spectral_radius(current);

    double theta = cfg.theta_strength;
    StrengthGraph graph;
    BlockSplit split;
    for (int attempt = 0;; ++attempt) {
      graph = strength_graph(current, theta);
      split = cf_split(graph);
      if (split.n_fine() > 0) break;
      if (attempt == 2)
        throw StagnationError("setup: coarsening stagnated at " + std::to_string(current.nrows()) +
                              " rows");
      theta = 0.5 * (theta + 1.0);
    }

    auto pattern = std::make_shared<const SparsityPattern>(
        pattern_distance_k(graph, split, cfg.pattern_degree));
    Interpolation interp =
        cfg.mode == EminMode::constrained
            ? constrained_energymin(current, split, lvl.candidates, pattern, cfg.emin_iters,
                                    ConstrainedOptions{cfg.precondition, cfg.emin_tol})
            : weighted_energymin(current, split, lvl.candidates, cfg.equivalence, cfg.tau,
                                 pattern, cfg.emin_iters, cfg.emin_tol,
                                 PcgOptions{cfg.precondition});

    lvl.split = split;
    lvl.p = std::move(interp.p);
    lvl.pt = lvl.p.transposed();
    lvl.emin_residual_history = std::move(interp.residual_history);
    lvl.constraint_violation_history = std::move(interp.constraint_violation_history);
    SparseMatrix coarse = galerkin_product(lvl.p, current);
    raw = inject(lvl.candidates, split);
    levels.push_back(std::move(lvl));
    current = std::move(coarse);
  }
  return Hierarchy(std::move(levels), cfg);
}

namespace {

void cycle(const Hierarchy& h, Index k, std::span<double> x, std::span<const double> b) {
  const Level& lvl = h.level(k);
  if (k + 1 == h.num_levels()) {
    const Vector sol = cholesky_solve(h.coarsest_factor(), b);
    std::copy(sol.begin(), sol.end(), x.begin());
    return;
  }
  relax_in_place(lvl.relaxation, lvl.a, x, b);
  const Vector r = residual(lvl.a, x, b);
  const Vector rc = spmv(lvl.pt, r);
  Vector ec(rc.size(), 0.0);
  cycle(h, k + 1, ec, rc);
  const Vector e = spmv(lvl.p, ec);
  for (Index i = 0; i < x.size(); ++i) x[i] += e[i];
  relax_in_place(lvl.relaxation, lvl.a, x, b);
}

} // namespace

Vector vcycle(const Hierarchy& h, Index level, std::span<const double> x,
              std::span<const double> b) {
  if (level >= h.num_levels()) throw DimensionError("vcycle: level out of range");
  const Index n = h.level(level).a.nrows();
  if (x.size() != n || b.size() != n) throw DimensionError("vcycle: vector length mismatch");
  Vector out(x.begin(), x.end());
  cycle(h, level, out, b);
  return out;
}

SolveResult solve(const Hierarchy& h, std::span<const double> b, double tol, Index max_iters,
                  Acceleration accel, std::optional<Vector> x0) {
  const SparseMatrix& a = h.level(0).a;
  const Index n = a.nrows();
  if (b.size() != n) throw DimensionError("solve: right-hand side length mismatch");
  SolveResult res;
  res.x = x0 ? std::move(*x0) : Vector(n, 0.0);
  if (res.x.size() != n) throw DimensionError("solve: initial guess length mismatch");

  Vector r = residual(a, res.x, b);
  const double r0 = norm2(r);
  res.residual_history.push_back(r0);
  if (r0 == 0.0) {
    res.converged = true;
    return res;
  }

  Index growth = 0;
  auto record = [&](double rn) {
    const double prev = res.residual_history.back();
    res.residual_history.push_back(rn);
    growth = rn > prev ? growth + 1 : 0;
    if (!std::isfinite(rn) || growth >= 10) res.diverged = true;
    if (rn <= tol * r0) res.converged = true;
  };

  if (accel == Acceleration::stationary) {
    for (Index it = 1; it <= max_iters; ++it) {
      cycle(h, 0, res.x, b);
      r = residual(a, res.x, b);
      res.iterations = it;
      record(norm2(r));
      if (res.converged || res.diverged) break;
    }
    return res;
  }

  const Vector zeros(n, 0.0);
  Vector z = vcycle(h, 0, zeros, r);
  Vector p = z;
  double rz = dot(r, z);
  for (Index it = 1; it <= max_iters; ++it) {
    const Vector ap = spmv(a, p);
    const double curvature = dot(p, ap);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) {
      res.diverged = true;
      break;
    }
    const double alpha = rz / curvature;
    for (Index i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    res.iterations = it;
    record(norm2(r));
    if (res.converged || res.diverged) break;
    z = vcycle(h, 0, zeros, r);
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (Index i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

double measure_contraction(const Hierarchy& h, Index iters, std::uint64_t seed) {
  const SparseMatrix& a = h.level(0).a;
  const Index n = a.nrows();
  Rng rng(seed);
  Vector e = rng.uniform_vector(n);
  const Vector zeros(n, 0.0);
  double estimate = 0.0;
  for (Index it = 0; it < iters; ++it) {
    const double ne = energy_norm(a, e);
    if (ne == 0.0) return 0.0;
    for (double& v : e) v /= ne;
    Vector next = vcycle(h, 0, e, zeros);
    // A-Rayleigh quotient of the (A-self-adjoint) propagator.
    const Vector ae = spmv(a, e);
    estimate = std::abs(dot(ae, next));
    e = std::move(next);
  }
  return estimate;
}

} // namespace emin
