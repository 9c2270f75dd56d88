#include "emin/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "emin/error.hpp"

namespace emin {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

} // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConstructionError("Matrix Market: empty input");
  std::istringstream hs(lower(header));
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
    throw ConstructionError("Matrix Market: missing %%MatrixMarket matrix banner");
  if (field != "real" && field != "integer" && field != "double")
    throw ConstructionError("Matrix Market: only real/integer fields are supported");
  const bool sym = symmetry == "symmetric";
  if (!sym && symmetry != "general")
    throw ConstructionError("Matrix Market: unsupported symmetry '" + symmetry + "'");

  std::string line;
  if (!next_data_line(in, line)) throw ConstructionError("Matrix Market: missing size line");
  std::istringstream ss(line);

  std::vector<Triplet> triplets;
  Index nrows = 0, ncols = 0;
  if (format == "coordinate") {
    Index nnz = 0;
    if (!(ss >> nrows >> ncols >> nnz)) throw ConstructionError("Matrix Market: bad size line");
    triplets.reserve(sym ? 2 * nnz : nnz);
    for (Index k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) throw ConstructionError("Matrix Market: truncated entries");
      std::istringstream es(line);
      Index i = 0, j = 0;
      double v = 0.0;
      if (!(es >> i >> j >> v) || i == 0 || j == 0 || i > nrows || j > ncols)
        throw ConstructionError("Matrix Market: bad entry '" + line + "'");
      triplets.push_back({i - 1, j - 1, v});
      if (sym && i != j) triplets.push_back({j - 1, i - 1, v});
    }
  } else if (format == "array") {
    if (!(ss >> nrows >> ncols)) throw ConstructionError("Matrix Market: bad size line");
    // Column-major; symmetric arrays list the lower triangle.
    for (Index j = 0; j < ncols; ++j) {
      for (Index i = sym ? j : 0; i < nrows; ++i) {
        if (!next_data_line(in, line)) throw ConstructionError("Matrix Market: truncated array");
        const double v = std::stod(line);
        if (v == 0.0) continue;
        triplets.push_back({i, j, v});
        if (sym && i != j) triplets.push_back({j, i, v});
      }
    }
  } else {
    throw ConstructionError("Matrix Market: unsupported format '" + format + "'");
  }
  return csr_from_triplets(triplets, nrows, ncols);
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry) {
  const bool sym = symmetry == MatrixMarketSymmetry::symmetric;
  Index count = 0;
  for (Index i = 0; i < a.nrows(); ++i)
    for (Index j : a.row_cols(i))
      if (!sym || j <= i) ++count;

  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << '\n';
  out << a.nrows() << ' ' << a.ncols() << ' ' << count << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < a.nrows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_vals(i);
    for (Index k = 0; k < cols.size(); ++k)
      if (!sym || cols[k] <= i) out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  write_matrix_market(out, a, symmetry);
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

} // namespace emin
