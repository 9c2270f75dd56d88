#pragma once

#include <span>
#include <vector>

#include "emin/dense.hpp"
#include "emin/pattern.hpp"
#include "emin/sparse.hpp"

namespace emin {

// Symmetric strength graph; adjacency values are |a_ij|/sqrt(a_ii a_jj).
struct StrengthGraph {
  SparseMatrix adjacency;  // no diagonal entries
  double theta_strength = 0.25;

  Index size() const noexcept { return adjacency.nrows(); }
};

enum class PointType : unsigned char { coarse, fine };

// C/F partition. F-points are numbered first in the "CF ordering" used
// by the block view [A_ff A_fc; A_cf A_cc] and by P = [W; I].
class BlockSplit {
public:
  BlockSplit() = default;
  explicit BlockSplit(std::vector<PointType> types);

  static BlockSplit all_coarse(Index n);

  Index size() const noexcept { return types_.size(); }
  Index n_coarse() const noexcept { return c_points_.size(); }
  Index n_fine() const noexcept { return f_points_.size(); }

  const std::vector<Index>& c_points() const noexcept { return c_points_; }
  const std::vector<Index>& f_points() const noexcept { return f_points_; }
  PointType type(Index i) const noexcept { return types_[i]; }
  bool is_coarse(Index i) const noexcept { return types_[i] == PointType::coarse; }
  // Position of i within c_points() or f_points().
  Index local_index(Index i) const noexcept { return local_[i]; }
  // Original index -> CF-ordered index (F block first, then C block).
  Index cf_index(Index i) const noexcept {
    return is_coarse(i) ? n_fine() + local_[i] : local_[i];
  }
  // cf_order()[k] is the original index placed at CF position k.
  std::vector<Index> cf_order() const;

  friend bool operator==(const BlockSplit& a, const BlockSplit& b) { return a.types_ == b.types_; }

private:
  std::vector<PointType> types_;
  std::vector<Index> c_points_;
  std::vector<Index> f_points_;
  std::vector<Index> local_;
};

struct BlockView {
  SparseMatrix ff, fc, cf, cc;
};
BlockView block_view(const SparseMatrix& a, const BlockSplit& split);

// Dense injections in CF ordering: R = [0 I] (n_c x n), S = [I 0]^T (n x n_f).
DenseMatrix injection_r(const BlockSplit& split);
DenseMatrix injection_s(const BlockSplit& split);
// Y a Y^T with rows/columns reordered into CF ordering.
DenseMatrix to_cf_ordering(const DenseMatrix& a, const BlockSplit& split);

// Edge (i,j) kept iff ratio_ij >= theta * max_{k!=i} ratio_ik with
// ratio_ij = |a_ij|/sqrt(a_ii a_jj); the result is symmetrized by union.
StrengthGraph strength_graph(const SparseMatrix& a, double theta_strength = 0.25);

// Greedy first-pass splitting (see coarsening.cpp for the measure).
BlockSplit cf_split(const StrengthGraph& s);

// (i, j) in N iff F-point i lies within k strength edges of C-point j.
SparsityPattern pattern_distance_k(const StrengthGraph& s, const BlockSplit& split, Index k);

} // namespace emin
