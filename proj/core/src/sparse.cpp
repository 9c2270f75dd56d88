#include "emin/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emin/error.hpp"

namespace emin {

SparseMatrix::SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
                           std::vector<Index> col_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != nrows_ + 1 || row_offsets_.front() != 0)
    throw ConstructionError("SparseMatrix: row_offsets must have nrows+1 entries starting at 0");
  if (row_offsets_.back() != values_.size() || col_indices_.size() != values_.size())
    throw ConstructionError("SparseMatrix: row_offsets, col_indices and values disagree");
  for (Index i = 0; i < nrows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i])
      throw ConstructionError("SparseMatrix: row_offsets must be non-decreasing");
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] >= ncols_)
        throw ConstructionError("SparseMatrix: column index out of range");
      if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1])
        throw ConstructionError("SparseMatrix: column indices must be strictly increasing");
    }
  }
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> offsets(n + 1);
  std::iota(offsets.begin(), offsets.end(), Index{0});
  std::vector<Index> cols(n);
  std::iota(cols.begin(), cols.end(), Index{0});
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& d, double drop_tol) {
  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < d.nrows(); ++i) {
    for (Index j = 0; j < d.ncols(); ++j) {
      if (d(i, j) != 0.0 && std::abs(d(i, j)) > drop_tol) {
        cols.push_back(j);
        vals.push_back(d(i, j));
      }
    }
    offsets.push_back(cols.size());
  }
  return SparseMatrix(d.nrows(), d.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

double SparseMatrix::at(Index i, Index j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_offsets_[i] + static_cast<Index>(it - cols.begin())];
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(nrows_, ncols_), 0.0);
  for (Index i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(nrows_, ncols_);
  for (Index i = 0; i < nrows_; ++i)
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      d(i, col_indices_[k]) += values_[k];
  return d;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Index> offsets(ncols_ + 1, 0);
  for (Index c : col_indices_) ++offsets[c + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<Index> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<Index> cols(nnz());
  std::vector<double> vals(nnz());
  for (Index i = 0; i < nrows_; ++i)
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const Index dst = cursor[col_indices_[k]]++;
      cols[dst] = i;
      vals[dst] = values_[k];
    }
  return SparseMatrix(ncols_, nrows_, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix csr_from_triplets(std::span<const Triplet> triplets, Index nrows, Index ncols) {
  std::vector<Index> count(nrows + 1, 0);
  for (const Triplet& t : triplets) {
    if (t.row >= nrows || t.col >= ncols)
      throw ConstructionError("csr_from_triplets: index out of range");
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<Index> cursor(count.begin(), count.end() - 1);
  std::vector<Index> cols(triplets.size());
  std::vector<double> vals(triplets.size());
  for (const Triplet& t : triplets) {
    const Index dst = cursor[t.row]++;
    cols[dst] = t.col;
    vals[dst] = t.value;
  }

  std::vector<Index> offsets{0};
  offsets.reserve(nrows + 1);
  std::vector<Index> out_cols;
  std::vector<double> out_vals;
  out_cols.reserve(triplets.size());
  out_vals.reserve(triplets.size());
  std::vector<Index> order;
  for (Index i = 0; i < nrows; ++i) {
    order.resize(count[i + 1] - count[i]);
    std::iota(order.begin(), order.end(), count[i]);
    std::sort(order.begin(), order.end(), [&](Index x, Index y) {
      return cols[x] != cols[y] ? cols[x] < cols[y] : x < y;
    });
    for (Index k : order) {
      if (out_cols.size() > offsets.back() && out_cols.back() == cols[k]) {
        out_vals.back() += vals[k];
      } else {
        out_cols.push_back(cols[k]);
        out_vals.push_back(vals[k]);
      }
    }
    offsets.push_back(out_cols.size());
  }
  return SparseMatrix(nrows, ncols, std::move(offsets), std::move(out_cols), std::move(out_vals));
}

void spmv_into(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.ncols() || y.size() != a.nrows())
    throw DimensionError("spmv: dimension mismatch");
  const auto& off = a.row_offsets();
  const auto& cols = a.col_indices();
  const auto& vals = a.values();
  for (Index i = 0; i < a.nrows(); ++i) {
    double s = 0.0;
    for (Index k = off[i]; k < off[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector y(a.nrows());
  spmv_into(a, x, y);
  return y;
}

Vector residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  if (b.size() != a.nrows()) throw DimensionError("residual: dimension mismatch");
  Vector r = spmv(a, x);
  for (Index i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.ncols() != b.nrows()) throw DimensionError("multiply: shape mismatch");
  std::vector<Index> offsets{0};
  offsets.reserve(a.nrows() + 1);
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> acc(b.ncols(), 0.0);
  std::vector<Index> marker(b.ncols(), static_cast<Index>(-1));
  std::vector<Index> row_pattern;
  for (Index i = 0; i < a.nrows(); ++i) {
    row_pattern.clear();
    auto acols = a.row_cols(i);
    auto avals = a.row_vals(i);
    for (Index ka = 0; ka < acols.size(); ++ka) {
      const Index k = acols[ka];
      const double aik = avals[ka];
      auto bcols = b.row_cols(k);
      auto bvals = b.row_vals(k);
      for (Index kb = 0; kb < bcols.size(); ++kb) {
        const Index j = bcols[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          row_pattern.push_back(j);
        }
        acc[j] += aik * bvals[kb];
      }
    }
    std::sort(row_pattern.begin(), row_pattern.end());
    for (Index j : row_pattern) {
      cols.push_back(j);
      vals.push_back(acc[j]);
    }
    offsets.push_back(cols.size());
  }
  return SparseMatrix(a.nrows(), b.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols())
    throw DimensionError("add: shape mismatch");
  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < a.nrows(); ++i) {
    auto ac = a.row_cols(i);
    auto av = a.row_vals(i);
    auto bc = b.row_cols(i);
    auto bv = b.row_vals(i);
    Index p = 0, q = 0;
    while (p < ac.size() || q < bc.size()) {
      if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
        cols.push_back(ac[p]);
        vals.push_back(alpha * av[p++]);
      } else if (p == ac.size() || bc[q] < ac[p]) {
        cols.push_back(bc[q]);
        vals.push_back(beta * bv[q++]);
      } else {
        cols.push_back(ac[p]);
        vals.push_back(alpha * av[p++] + beta * bv[q++]);
      }
    }
    offsets.push_back(cols.size());
  }
  return SparseMatrix(a.nrows(), a.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix submatrix(const SparseMatrix& a, std::span<const Index> rows,
                       std::span<const Index> cols) {
  constexpr Index absent = static_cast<Index>(-1);
  std::vector<Index> col_map(a.ncols(), absent);
  for (Index k = 0; k < cols.size(); ++k) {
    if (cols[k] >= a.ncols()) throw DimensionError("submatrix: column out of range");
    col_map[cols[k]] = k;
  }
  std::vector<Index> offsets{0};
  std::vector<Index> out_cols;
  std::vector<double> out_vals;
  std::vector<std::pair<Index, double>> row;
  for (Index r : rows) {
    if (r >= a.nrows()) throw DimensionError("submatrix: row out of range");
    row.clear();
    auto rc = a.row_cols(r);
    auto rv = a.row_vals(r);
    for (Index k = 0; k < rc.size(); ++k)
      if (col_map[rc[k]] != absent) row.emplace_back(col_map[rc[k]], rv[k]);
    std::sort(row.begin(), row.end());
    for (auto [c, v] : row) {
      out_cols.push_back(c);
      out_vals.push_back(v);
    }
    offsets.push_back(out_cols.size());
  }
  return SparseMatrix(rows.size(), cols.size(), std::move(offsets), std::move(out_cols),
                      std::move(out_vals));
}

SparseMatrix drop_small(const SparseMatrix& a, double tol) {
  std::vector<Index> offsets{0};
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < a.nrows(); ++i) {
    auto rc = a.row_cols(i);
    auto rv = a.row_vals(i);
    for (Index k = 0; k < rc.size(); ++k)
      if (std::abs(rv[k]) > tol) {
        cols.push_back(rc[k]);
        vals.push_back(rv[k]);
      }
    offsets.push_back(cols.size());
  }
  return SparseMatrix(a.nrows(), a.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

bool is_symmetric(const SparseMatrix& a, double rel_tol) {
  if (a.nrows() != a.ncols()) return false;
  double scale = 0.0;
  for (double v : a.values()) scale = std::max(scale, std::abs(v));
  const SparseMatrix diff = add(a, a.transposed(), 1.0, -1.0);
  for (double v : diff.values())
    if (std::abs(v) > rel_tol * scale) return false;
  return true;
}

double frobenius_norm(const SparseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double energy_norm(const SparseMatrix& a, std::span<const double> x) {
  const Vector ax = spmv(a, x);
  return std::sqrt(std::max(0.0, dot(ax, x)));
}

double power_spectral_norm(const SparseMatrix& a, int iters, double rel_tol) {
  const Index n = a.nrows();
  if (n == 0) return 0.0;
  // Deterministic, non-symmetric start vector so no eigencomponent vanishes.
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.0 + 0.37 * static_cast<double>(i));
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double nx = norm2(x);
    if (nx == 0.0) return 0.0;
    for (double& v : x) v /= nx;
    Vector y = spmv(a, x);
    const double next = dot(x, y);
    x = std::move(y);
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

} // namespace emin
