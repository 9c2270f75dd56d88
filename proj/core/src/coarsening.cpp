#include "emin/coarsening.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "emin/error.hpp"

namespace emin {

BlockSplit::BlockSplit(std::vector<PointType> types) : types_(std::move(types)) {
  local_.resize(types_.size());
  for (Index i = 0; i < types_.size(); ++i) {
    if (types_[i] == PointType::coarse) {
      local_[i] = c_points_.size();
      c_points_.push_back(i);
    } else {
      local_[i] = f_points_.size();
      f_points_.push_back(i);
    }
  }
}

BlockSplit BlockSplit::all_coarse(Index n) {
  return BlockSplit(std::vector<PointType>(n, PointType::coarse));
}

std::vector<Index> BlockSplit::cf_order() const {
  std::vector<Index> order(f_points_);
  order.insert(order.end(), c_points_.begin(), c_points_.end());
  return order;
}

BlockView block_view(const SparseMatrix& a, const BlockSplit& split) {
  if (a.nrows() != split.size() || a.ncols() != split.size())
    throw DimensionError("block_view: split does not match matrix");
  const auto& f = split.f_points();
  const auto& c = split.c_points();
  return {submatrix(a, f, f), submatrix(a, f, c), submatrix(a, c, f), submatrix(a, c, c)};
}

DenseMatrix injection_r(const BlockSplit& split) {
  DenseMatrix r(split.n_coarse(), split.size());
  for (Index k = 0; k < split.n_coarse(); ++k) r(k, split.n_fine() + k) = 1.0;
  return r;
}

DenseMatrix injection_s(const BlockSplit& split) {
  DenseMatrix s(split.size(), split.n_fine());
  for (Index k = 0; k < split.n_fine(); ++k) s(k, k) = 1.0;
  return s;
}

DenseMatrix to_cf_ordering(const DenseMatrix& a, const BlockSplit& split) {
  if (a.nrows() != split.size() || a.ncols() != split.size())
    throw DimensionError("to_cf_ordering: shape mismatch");
  const auto order = split.cf_order();
  DenseMatrix out(a.nrows(), a.ncols());
  for (Index i = 0; i < order.size(); ++i)
    for (Index j = 0; j < order.size(); ++j) out(i, j) = a(order[i], order[j]);
  return out;
}

StrengthGraph strength_graph(const SparseMatrix& a, double theta_strength) {
  if (a.nrows() != a.ncols()) throw DimensionError("strength_graph: matrix not square");
  if (!(theta_strength >= 0.0 && theta_strength <= 1.0))
    throw ConfigError("strength_graph: theta_strength must lie in [0,1]");
  const Index n = a.nrows();
  const Vector d = a.diagonal();
  for (double v : d)
    if (!(v > 0.0)) throw SingularMatrixError("strength_graph: nonpositive diagonal entry");

  std::vector<Triplet> edges;
  for (Index i = 0; i < n; ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_vals(i);
    double row_max = 0.0;
    for (Index k = 0; k < cols.size(); ++k)
      if (cols[k] != i) row_max = std::max(row_max, std::abs(vals[k]) / std::sqrt(d[i] * d[cols[k]]));
    for (Index k = 0; k < cols.size(); ++k) {
      const Index j = cols[k];
      if (j == i || vals[k] == 0.0) continue;
      const double ratio = std::abs(vals[k]) / std::sqrt(d[i] * d[j]);
      if (ratio >= theta_strength * row_max) {
        edges.push_back({i, j, ratio});
        edges.push_back({j, i, ratio});
      }
    }
  }
  // Union: duplicates were summed, so restore the single ratio value.
  SparseMatrix summed = csr_from_triplets(edges, n, n);
  std::vector<double> vals(summed.values().size());
  for (Index i = 0; i < n; ++i) {
    auto cols = summed.row_cols(i);
    for (Index k = 0; k < cols.size(); ++k) {
      const Index j = cols[k];
      vals[summed.row_offsets()[i] + k] = std::abs(a.at(i, j)) / std::sqrt(d[i] * d[j]);
    }
  }
  return {SparseMatrix(n, n, summed.row_offsets(), summed.col_indices(), std::move(vals)),
          theta_strength};
}

BlockSplit cf_split(const StrengthGraph& s) {
  // Measure of an unassigned vertex = number of its strong neighbours
  // already made F. Repeatedly take the largest measure (lowest index on
  // ties), make it C and its unassigned strong neighbours F. Vertices
  // without strong edges become C.
  const Index n = s.size();
  const SparseMatrix& g = s.adjacency;
  enum class State : unsigned char { unassigned, coarse, fine };
  std::vector<State> state(n, State::unassigned);
  std::vector<Index> measure(n, 0);

  // Ordered by (-measure, index).
  std::set<std::pair<long long, Index>> queue;
  for (Index i = 0; i < n; ++i) {
    if (g.row_cols(i).empty()) {
      state[i] = State::coarse;
    } else {
      queue.emplace(0, i);
    }
  }
  auto bump = [&](Index v) {
    queue.erase({-static_cast<long long>(measure[v]), v});
    ++measure[v];
    queue.emplace(-static_cast<long long>(measure[v]), v);
  };

  while (!queue.empty()) {
    const Index c = queue.begin()->second;
    queue.erase(queue.begin());
    state[c] = State::coarse;
    for (Index f : g.row_cols(c)) {
      if (state[f] != State::unassigned) continue;
      queue.erase({-static_cast<long long>(measure[f]), f});
      state[f] = State::fine;
      for (Index u : g.row_cols(f))
        if (state[u] == State::unassigned) bump(u);
    }
  }

  std::vector<PointType> types(n);
  for (Index i = 0; i < n; ++i)
    types[i] = state[i] == State::fine ? PointType::fine : PointType::coarse;
  return BlockSplit(std::move(types));
}

SparsityPattern pattern_distance_k(const StrengthGraph& s, const BlockSplit& split, Index k) {
  if (k < 1) throw ConfigError("pattern_distance_k: degree must be at least 1");
  const Index n = s.size();
  if (split.size() != n) throw DimensionError("pattern_distance_k: split does not match graph");
  const SparseMatrix& g = s.adjacency;

  std::vector<std::vector<Index>> rows(split.n_fine());
  constexpr Index unvisited = static_cast<Index>(-1);
  std::vector<Index> visited_by(n, unvisited);
  std::vector<Index> frontier, next;
  for (Index cj = 0; cj < split.n_coarse(); ++cj) {
    const Index root = split.c_points()[cj];
    frontier.assign(1, root);
    visited_by[root] = cj;
    for (Index depth = 0; depth < k && !frontier.empty(); ++depth) {
      next.clear();
      for (Index v : frontier)
        for (Index u : g.row_cols(v)) {
          if (visited_by[u] == cj) continue;
          visited_by[u] = cj;
          next.push_back(u);
          if (!split.is_coarse(u)) rows[split.local_index(u)].push_back(cj);
        }
      frontier.swap(next);
    }
  }
  return SparsityPattern(split.n_fine(), split.n_coarse(), std::move(rows), k);
}

} // namespace emin
