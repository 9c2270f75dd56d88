#include "emin/energymin.hpp"

#include <algorithm>
#include <cmath>

#include "emin/error.hpp"

namespace emin {

namespace {

DenseMatrix select_rows(const DenseMatrix& m, const std::vector<Index>& rows) {
  DenseMatrix out(rows.size(), m.ncols());
  for (Index k = 0; k < rows.size(); ++k) {
    auto src = m.row(rows[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Per-row data for the constraint W B_c = B_f: an orthonormal basis Q of
// the span of the row's B_c rows (m x r, row-major) and the minimal-norm
// feasible row.
struct RowConstraint {
  Index rank = 0;
  std::vector<double> q;  // m * rank
};

// Orthonormal basis of range(c) (m x nb) by twice-iterated modified
// Gram-Schmidt, dropping columns that vanish relative to their norm.
RowConstraint orthonormal_basis(const DenseMatrix& c) {
  const Index m = c.nrows();
  const Index nb = c.ncols();
  RowConstraint rc;
  std::vector<std::vector<double>> basis;
  for (Index k = 0; k < nb; ++k) {
    std::vector<double> v = c.column(k);
    const double original = norm2(v);
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const double proj = dot(q, v);
        for (Index i = 0; i < m; ++i) v[i] -= proj * q[i];
      }
    const double nv = norm2(v);
    if (nv <= 1e-10 * original) continue;
    for (double& x : v) x /= nv;
    basis.push_back(std::move(v));
  }
  rc.rank = basis.size();
  rc.q.resize(m * rc.rank);
  for (Index k = 0; k < rc.rank; ++k)
    for (Index i = 0; i < m; ++i) rc.q[i * rc.rank + k] = basis[k][i];
  return rc;
}

class ConstraintSpace {
public:
  ConstraintSpace(const PatternPtr& pattern, const DenseMatrix& b_c) : pattern_(pattern) {
    rows_.resize(pattern->nrows());
    DenseMatrix local;
    for (Index i = 0; i < pattern->nrows(); ++i) {
      auto cols = pattern->row(i);
      local = DenseMatrix(cols.size(), b_c.ncols());
      for (Index k = 0; k < cols.size(); ++k) {
        auto src = b_c.row(cols[k]);
        std::copy(src.begin(), src.end(), local.row(k).begin());
      }
      rows_[i] = orthonormal_basis(local);
    }
  }

  // Removes from every row its component along span(B_c rows).
  void project(PatternMatrix& z) const {
    std::vector<double> coeff;
    for (Index i = 0; i < rows_.size(); ++i) {
      const RowConstraint& rc = rows_[i];
      if (rc.rank == 0) continue;
      auto v = z.row_values(i);
      coeff.assign(rc.rank, 0.0);
      for (Index a = 0; a < v.size(); ++a)
        for (Index k = 0; k < rc.rank; ++k) coeff[k] += v[a] * rc.q[a * rc.rank + k];
      for (Index a = 0; a < v.size(); ++a)
        for (Index k = 0; k < rc.rank; ++k) v[a] -= coeff[k] * rc.q[a * rc.rank + k];
    }
  }

private:
  PatternPtr pattern_;
  std::vector<RowConstraint> rows_;
};

} // namespace

DenseMatrix CandidateSet::fine_rows(const BlockSplit& split) const {
  return select_rows(vectors, split.f_points());
}

DenseMatrix CandidateSet::coarse_rows(const BlockSplit& split) const {
  return select_rows(vectors, split.c_points());
}

CandidateSet prepare_candidates(const SparseMatrix& a, const DenseMatrix& raw) {
  if (raw.nrows() != a.nrows()) throw DimensionError("prepare_candidates: length mismatch");
  if (raw.ncols() < 1) throw DependentVectorError("prepare_candidates: no candidate vectors");
  CandidateSet out{DenseMatrix(raw.nrows(), raw.ncols())};
  std::vector<Vector> done;
  std::vector<Vector> done_a;  // A v for accepted vectors
  for (Index k = 0; k < raw.ncols(); ++k) {
    Vector v = raw.column(k);
    const double original = energy_norm(a, v);
    if (!(original > 0.0))
      throw DependentVectorError("prepare_candidates: candidate has zero A-norm");
    for (Index j = 0; j < done.size(); ++j) {
      const double proj = dot(done_a[j], v);
      for (Index i = 0; i < v.size(); ++i) v[i] -= proj * done[j][i];
    }
    Vector av = spmv(a, v);
    const double nv = std::sqrt(std::max(0.0, dot(av, v)));
    if (nv < 1e-13 * original || nv < 1e-300)
      throw DependentVectorError("prepare_candidates: candidate vectors are dependent in the A-inner product");
    for (double& x : v) x /= nv;
    for (double& x : av) x /= nv;
    out.vectors.set_column(k, v);
    done.push_back(std::move(v));
    done_a.push_back(std::move(av));
  }
  return out;
}

PatternMatrix restrict_sparse(const PatternPtr& pattern, const SparseMatrix& m) {
  if (m.nrows() != pattern->nrows() || m.ncols() != pattern->ncols())
    throw DimensionError("restrict_sparse: shape mismatch");
  PatternMatrix out(pattern);
  for (Index i = 0; i < pattern->nrows(); ++i) {
    auto pc = pattern->row(i);
    auto pv = out.row_values(i);
    auto mc = m.row_cols(i);
    auto mv = m.row_vals(i);
    Index p = 0, q = 0;
    while (p < pc.size() && q < mc.size()) {
      if (pc[p] < mc[q]) {
        ++p;
      } else if (mc[q] < pc[p]) {
        ++q;
      } else {
        pv[p++] = mv[q++];
      }
    }
  }
  return out;
}

PatternMatrix restricted_product(const SparseMatrix& a, const PatternMatrix& w,
                                 const PatternPtr& target) {
  if (a.ncols() != w.nrows() || target->nrows() != a.nrows() || target->ncols() != w.ncols())
    throw DimensionError("restricted_product: shape mismatch");
  PatternMatrix out(target);
  constexpr Index absent = static_cast<Index>(-1);
  std::vector<Index> slot(target->ncols(), absent);
  const auto& wp = w.pattern();
  for (Index i = 0; i < target->nrows(); ++i) {
    auto tc = target->row(i);
    if (tc.empty()) continue;
    for (Index k = 0; k < tc.size(); ++k) slot[tc[k]] = k;
    auto ov = out.row_values(i);
    auto ac = a.row_cols(i);
    auto av = a.row_vals(i);
    for (Index ka = 0; ka < ac.size(); ++ka) {
      const Index k = ac[ka];
      const double aik = av[ka];
      auto wc = wp.row(k);
      auto wv = w.row_values(k);
      for (Index q = 0; q < wc.size(); ++q) {
        const Index s = slot[wc[q]];
        if (s != absent) ov[s] += aik * wv[q];
      }
    }
    for (Index c : tc) slot[c] = absent;
  }
  return out;
}

double constraint_violation(const PatternMatrix& w, const DenseMatrix& b_f,
                            const DenseMatrix& b_c) {
  double worst = 0.0;
  const auto& p = w.pattern();
  std::vector<double> acc(b_c.ncols());
  for (Index i = 0; i < p.nrows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    auto cols = p.row(i);
    auto vals = w.row_values(i);
    for (Index k = 0; k < cols.size(); ++k) {
      auto br = b_c.row(cols[k]);
      for (Index m = 0; m < acc.size(); ++m) acc[m] += vals[k] * br[m];
    }
    for (Index m = 0; m < acc.size(); ++m) worst = std::max(worst, std::abs(acc[m] - b_f(i, m)));
  }
  return worst;
}

// --- weighted system -------------------------------------------------------

PatternMatrix WeightedSystem::apply(const PatternMatrix& w) const {
  PatternMatrix out = restricted_product(a_ff, w, pattern);
  auto ov = out.values();
  for (double& v : ov) v *= tau;
  const double weight = c2 * (1.0 - tau);
  if (weight == 0.0) return out;

  const Index nb = b_c.ncols();
  std::vector<double> wb(nb);
  for (Index i = 0; i < pattern->nrows(); ++i) {
    auto cols = pattern->row(i);
    auto wv = w.row_values(i);
    auto rv = out.row_values(i);
    std::fill(wb.begin(), wb.end(), 0.0);
    for (Index k = 0; k < cols.size(); ++k) {
      auto br = b_c.row(cols[k]);
      for (Index m = 0; m < nb; ++m) wb[m] += wv[k] * br[m];
    }
    const double s = weight * x_ff_diag[i];
    for (Index k = 0; k < cols.size(); ++k) {
      auto br = b_c.row(cols[k]);
      double v = 0.0;
      for (Index m = 0; m < nb; ++m) v += wb[m] * br[m];
      rv[k] += s * v;
    }
  }
  return out;
}

double WeightedSystem::functional(const PatternMatrix& w) const {
  return 0.5 * pattern_inner(apply(w), w) - pattern_inner(w, rhs);
}

Vector WeightedSystem::bcbct_diagonal() const {
  Vector d(b_c.nrows(), 0.0);
  for (Index j = 0; j < b_c.nrows(); ++j)
    for (double v : b_c.row(j)) d[j] += v * v;
  return d;
}

WeightedSystem build_weighted_system(const SparseMatrix& a, const BlockSplit& split,
                                     const CandidateSet& candidates,
                                     const SpectralEquivalence& x, double tau,
                                     PatternPtr pattern) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("build_weighted_system: tau must lie in [0,1]");
  if (candidates.size() != a.nrows())
    throw DimensionError("build_weighted_system: candidate length mismatch");
  if (pattern->nrows() != split.n_fine() || pattern->ncols() != split.n_coarse())
    throw DimensionError("build_weighted_system: pattern shape does not match split");
  x.validate();

  WeightedSystem sys;
  sys.tau = tau;
  sys.c2 = x.c2;
  const BlockView blocks = block_view(a, split);
  sys.a_ff = blocks.ff;
  sys.a_fc = blocks.fc;
  const Vector a_diag = a.diagonal();
  const Vector x_all = x.x_diagonal(a_diag);
  sys.x_ff_diag.resize(split.n_fine());
  for (Index k = 0; k < split.n_fine(); ++k) sys.x_ff_diag[k] = x_all[split.f_points()[k]];
  sys.b_c = candidates.coarse_rows(split);
  const DenseMatrix b_f = candidates.fine_rows(split);
  sys.pattern = pattern;

  const double weight = sys.c2 * (1.0 - tau);
  const Index nb = candidates.count();

  // B^ = [weight X_ff B_f B_c^T - tau A_fc]|N
  sys.rhs = restrict_sparse(pattern, sys.a_fc);
  for (double& v : sys.rhs.values()) v *= -tau;
  if (weight != 0.0) {
    for (Index i = 0; i < pattern->nrows(); ++i) {
      auto cols = pattern->row(i);
      auto rv = sys.rhs.row_values(i);
      auto bf = b_f.row(i);
      for (Index k = 0; k < cols.size(); ++k) {
        auto bc = sys.b_c.row(cols[k]);
        double v = 0.0;
        for (Index m = 0; m < nb; ++m) v += bf[m] * bc[m];
        rv[k] += weight * sys.x_ff_diag[i] * v;
      }
    }
  }

  const Vector bb = sys.bcbct_diagonal();
  const Vector aff_diag = sys.a_ff.diagonal();
  sys.dprec = PatternMatrix(pattern);
  for (Index i = 0; i < pattern->nrows(); ++i) {
    auto cols = pattern->row(i);
    auto dv = sys.dprec.row_values(i);
    for (Index k = 0; k < cols.size(); ++k) {
      const double denom = tau * aff_diag[i] + weight * bb[cols[k]] * sys.x_ff_diag[i];
      if (denom == 0.0 || !std::isfinite(denom))
        throw DegenerateWeightError("build_weighted_system: zero preconditioner denominator at (" +
                                    std::to_string(i) + "," + std::to_string(cols[k]) + ")");
      dv[k] = 1.0 / denom;
    }
  }
  return sys;
}

PcgResult pcg_frobenius(const WeightedSystem& sys, const PatternMatrix& w0, Index max_iters,
                        double tol, const PcgOptions& options) {
  if (!w0.same_pattern(sys.rhs)) throw DimensionError("pcg_frobenius: W0 does not conform to the pattern");
  PcgResult res;
  res.w = w0;
  PatternMatrix r = sys.rhs;
  axpy(-1.0, sys.apply(res.w), r);

  auto precondition = [&](const PatternMatrix& rr) {
    return options.precondition ? hadamard(sys.dprec, rr) : rr;
  };

  PatternMatrix z = precondition(r);
  double rz = pattern_inner(r, z);
  res.residual_history.push_back(frobenius_norm(r));
  res.precond_residual_history.push_back(std::sqrt(std::max(rz, 0.0)));
  res.functional_history.push_back(sys.functional(res.w));
  const double initial = res.precond_residual_history.front();
  const double floor =
      1e-14 * std::max(frobenius_norm(sys.rhs), frobenius_norm(sys.apply(res.w)));
  if (initial == 0.0 || res.residual_history.front() <= floor) {
    res.converged = true;
    return res;
  }

  PatternMatrix p = z;
  for (Index it = 1; it <= max_iters; ++it) {
    const PatternMatrix lp = sys.apply(p);
    const double curvature = pattern_inner(p, lp);
    if (!std::isfinite(curvature) || !(curvature > 0.0))
      throw BreakdownError("pcg_frobenius: non-finite or nonpositive curvature", it);
    const double alpha = rz / curvature;
    axpy(alpha, p, res.w);
    axpy(-alpha, lp, r);
    if (!all_finite(res.w.values()) || !all_finite(r.values()))
      throw BreakdownError("pcg_frobenius: non-finite iterate", it);

    z = precondition(r);
    const double rz_next = pattern_inner(r, z);
    res.iterations = it;
    res.residual_history.push_back(frobenius_norm(r));
    res.precond_residual_history.push_back(std::sqrt(std::max(rz_next, 0.0)));
    res.functional_history.push_back(sys.functional(res.w));
    if (res.precond_residual_history.back() <= tol * initial) {
      res.converged = true;
      break;
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    auto pv = p.values();
    auto zv = z.values();
    for (Index k = 0; k < pv.size(); ++k) pv[k] = zv[k] + beta * pv[k];
  }
  return res;
}

// --- interpolation ---------------------------------------------------------

SparseMatrix assemble_P(const PatternMatrix& w, const BlockSplit& split) {
  if (w.nrows() != split.n_fine() || w.ncols() != split.n_coarse())
    throw DimensionError("assemble_P: W shape does not match split");
  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  offsets.reserve(split.size() + 1);
  for (Index i = 0; i < split.size(); ++i) {
    if (split.is_coarse(i)) {
      cols.push_back(split.local_index(i));
      vals.push_back(1.0);
    } else {
      const Index f = split.local_index(i);
      auto wc = w.pattern().row(f);
      auto wv = w.row_values(f);
      cols.insert(cols.end(), wc.begin(), wc.end());
      vals.insert(vals.end(), wv.begin(), wv.end());
    }
    offsets.push_back(cols.size());
  }
  return SparseMatrix(split.size(), split.n_coarse(), std::move(offsets), std::move(cols),
                      std::move(vals));
}

PatternMatrix initial_guess(const BlockSplit& split, const CandidateSet& candidates,
                            PatternPtr pattern) {
  if (pattern->nrows() != split.n_fine() || pattern->ncols() != split.n_coarse())
    throw DimensionError("initial_guess: pattern shape does not match split");
  const DenseMatrix b_f = candidates.fine_rows(split);
  const DenseMatrix b_c = candidates.coarse_rows(split);
  const Index nb = candidates.count();
  PatternMatrix w(pattern);

  DenseMatrix local;
  for (Index i = 0; i < pattern->nrows(); ++i) {
    auto cols = pattern->row(i);
    auto bf = b_f.row(i);
    const bool nonzero_target =
        std::any_of(bf.begin(), bf.end(), [](double v) { return v != 0.0; });
    if (cols.empty()) {
      if (nonzero_target)
        throw InfeasibleConstraintError("initial_guess: F-row " + std::to_string(i) +
                                        " has an empty pattern but a nonzero constraint");
      continue;
    }
    if (!nonzero_target) continue;

    local = DenseMatrix(cols.size(), nb);
    for (Index k = 0; k < cols.size(); ++k) {
      auto src = b_c.row(cols[k]);
      std::copy(src.begin(), src.end(), local.row(k).begin());
    }
    // Minimal-norm w with w C = b: w = y Q^T, y (Q^T C) = b in least squares.
    const RowConstraint rc = orthonormal_basis(local);
    if (rc.rank == 0) continue;
    DenseMatrix qtc(rc.rank, nb);  // Q^T C
    for (Index k = 0; k < rc.rank; ++k)
      for (Index m = 0; m < nb; ++m) {
        double s = 0.0;
        for (Index a = 0; a < cols.size(); ++a) s += rc.q[a * rc.rank + k] * local(a, m);
        qtc(k, m) = s;
      }
    const DenseMatrix gram = qtc * qtc.transposed();
    const Vector rhs = qtc * bf;
    const Vector y = solve(gram, rhs);
    auto wv = w.row_values(i);
    for (Index a = 0; a < cols.size(); ++a) {
      double s = 0.0;
      for (Index k = 0; k < rc.rank; ++k) s += y[k] * rc.q[a * rc.rank + k];
      wv[a] = s;
    }
  }
  return w;
}

Interpolation constrained_energymin(const SparseMatrix& a, const BlockSplit& split,
                                    const CandidateSet& candidates, PatternPtr pattern,
                                    Index iters, const ConstrainedOptions& options) {
  const BlockView blocks = block_view(a, split);
  const DenseMatrix b_f = candidates.fine_rows(split);
  const DenseMatrix b_c = candidates.coarse_rows(split);
  const ConstraintSpace space(pattern, b_c);
  const Vector aff_diag = blocks.ff.diagonal();
  for (double d : aff_diag)
    if (!(d > 0.0)) throw SingularMatrixError("constrained_energymin: nonpositive A_ff diagonal");

  Interpolation out;
  out.split = split;
  out.w = initial_guess(split, candidates, pattern);
  PatternMatrix& w = out.w;

  // Negative gradient of 1/2 <A_ff W, W> + <W, A_fc>, projected.
  PatternMatrix r = restrict_sparse(pattern, blocks.fc);
  const double fc_norm = frobenius_norm(r);
  axpy(1.0, restricted_product(blocks.ff, w, pattern), r);
  for (double& v : r.values()) v = -v;
  // Projected gradients below this are round-off of the unprojected one.
  const double floor = 1e-13 * std::max(fc_norm, frobenius_norm(r));
  space.project(r);

  auto precondition = [&](const PatternMatrix& rr) {
    PatternMatrix z = rr;
    if (options.precondition) {
      for (Index i = 0; i < pattern->nrows(); ++i)
        for (double& v : z.row_values(i)) v /= aff_diag[i];
    }
    // Row scaling commutes with the row-wise projector; re-projecting only
    // removes round-off drift.
    space.project(z);
    return z;
  };

  out.residual_history.push_back(frobenius_norm(r));
  out.constraint_violation_history.push_back(constraint_violation(w, b_f, b_c));

  PatternMatrix z = precondition(r);
  double rz = pattern_inner(r, z);
  const double initial = std::sqrt(std::max(rz, 0.0));
  PatternMatrix p(pattern);
  for (Index it = 1; it <= iters; ++it) {
    if (rz <= 0.0 || out.residual_history.back() <= floor) break;
    if (it == 1) p = z;
    PatternMatrix ap = restricted_product(blocks.ff, p, pattern);
    space.project(ap);
    const double curvature = pattern_inner(p, ap);
    if (!std::isfinite(curvature))
      throw BreakdownError("constrained_energymin: non-finite curvature", it);
    if (!(curvature > 0.0)) break;
    const double alpha = rz / curvature;
    axpy(alpha, p, w);
    axpy(-alpha, ap, r);
    if (!all_finite(w.values()))
      throw BreakdownError("constrained_energymin: non-finite iterate", it);
    out.residual_history.push_back(frobenius_norm(r));
    out.constraint_violation_history.push_back(constraint_violation(w, b_f, b_c));

    z = precondition(r);
    const double rz_next = pattern_inner(r, z);
    if (options.tol > 0.0 && std::sqrt(std::max(rz_next, 0.0)) <= options.tol * initial) break;
    const double beta = rz_next / rz;
    rz = rz_next;
    auto pv = p.values();
    auto zv = z.values();
    for (Index k = 0; k < pv.size(); ++k) pv[k] = zv[k] + beta * pv[k];
  }

  out.p = assemble_P(w, split);
  return out;
}

Interpolation weighted_energymin(const SparseMatrix& a, const BlockSplit& split,
                                 const CandidateSet& candidates, const SpectralEquivalence& x,
                                 double tau, PatternPtr pattern, Index iters, double tol,
                                 const PcgOptions& options) {
  const WeightedSystem sys = build_weighted_system(a, split, candidates, x, tau, pattern);
  const PatternMatrix w0 = initial_guess(split, candidates, pattern);
  PcgResult res = pcg_frobenius(sys, w0, iters, tol, options);

  Interpolation out;
  out.split = split;
  out.w = std::move(res.w);
  out.residual_history = std::move(res.residual_history);
  const DenseMatrix b_f = candidates.fine_rows(split);
  const DenseMatrix b_c = candidates.coarse_rows(split);
  out.constraint_violation_history.push_back(constraint_violation(out.w, b_f, b_c));
  out.p = assemble_P(out.w, split);
  return out;
}

} // namespace emin
