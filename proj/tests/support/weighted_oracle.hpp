#pragma once
// Random weighted-system instances and the dense vectorized operator used
// to check the pattern-restricted solvers.

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>

#include "emin/energymin.hpp"
#include "oracles.hpp"

namespace emin::oracle {

struct Instance {
  SparseMatrix a;
  DenseMatrix dense;
  BlockSplit split;
  CandidateSet cands;
  PatternPtr pattern;
};

inline PatternPtr random_pattern(Index nf, Index nc, double density, Index min_per_row, Rng& rng) {
  std::vector<std::vector<Index>> rows(nf);
  for (auto& r : rows) {
    for (Index j = 0; j < nc; ++j)
      if (rng.uniform() < density) r.push_back(j);
    while (r.size() < min_per_row) r.push_back(rng.below(nc));
  }
  return std::make_shared<const SparsityPattern>(SparsityPattern(nf, nc, std::move(rows)));
}

inline Instance random_instance(Index nf, Index nc, Index nb, double density, Rng& rng,
                         Index min_per_row = 1) {
  Instance in;
  in.dense = random_spd(nf + nc, rng);
  in.a = SparseMatrix::from_dense(in.dense);
  in.split = random_split(nf + nc, nc, rng);
  in.cands = prepare_candidates(in.a, random_dense(nf + nc, nb, rng));
  in.pattern = random_pattern(nf, nc, density, min_per_row, rng);
  return in;
}

inline PatternMatrix random_on(const PatternPtr& p, Rng& rng) {
  return PatternMatrix(p, rng.uniform_vector(p->size()));
}

// Vectorized L^ over the pattern positions and the matching right-hand side,
// assembled entry by entry from the defining formula.
struct DenseWeighted {
  DenseMatrix l;
  Vector rhs;
};

inline DenseWeighted dense_weighted(const Instance& in, double tau, double c2,
                             const SpectralEquivalence& x) {
  DenseMatrix acf = to_cf_ordering(in.dense, in.split);
  const Index nf = in.split.n_fine();
  const DenseMatrix bc = in.cands.coarse_rows(in.split), bf = in.cands.fine_rows(in.split);
  const DenseMatrix bcbct = matmul(bc, transpose(bc));
  const DenseMatrix bfbct = matmul(bf, transpose(bc));
  Vector aff_diag(nf);
  for (Index i = 0; i < nf; ++i) aff_diag[i] = acf(i, i);
  const Vector xd = x.x_diagonal(aff_diag);
  const SparsityPattern& pat = *in.pattern;
  std::vector<std::pair<Index, Index>> pos;
  for (Index i = 0; i < nf; ++i)
    for (Index j : pat.row(i)) pos.push_back({i, j});
  DenseWeighted out{DenseMatrix(pos.size(), pos.size()), Vector(pos.size())};
  for (Index r = 0; r < pos.size(); ++r) {
    auto [p, q] = pos[r];
    out.rhs[r] = c2 * (1.0 - tau) * xd[p] * bfbct(p, q) - tau * acf(p, nf + q);
    for (Index k = 0; k < pos.size(); ++k) {
      auto [i, j] = pos[k];
      double v = 0.0;
      if (q == j) v += tau * acf(p, i);
      if (p == i) v += c2 * (1.0 - tau) * xd[p] * bcbct(j, q);
      out.l(r, k) = v;
    }
  }
  return out;
}

inline double rel_err(std::span<const double> x, std::span<const double> ref) {
  double num = 0.0, den = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    num += (x[i] - ref[i]) * (x[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace emin::oracle
