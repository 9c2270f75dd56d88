#pragma once

#include <filesystem>
#include <iosfwd>

#include "emin/sparse.hpp"

namespace emin {

enum class MatrixMarketSymmetry { general, symmetric };

// Reads "%%MatrixMarket matrix coordinate real general|symmetric" (and the
// dense "array real general" variant). Indices in the file are 1-based.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

// Symmetric output stores the lower triangle only; the caller is expected
// to pass a symmetric matrix.
void write_matrix_market(std::ostream& out, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::general);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a,
                         MatrixMarketSymmetry symmetry = MatrixMarketSymmetry::general);

} // namespace emin
