#pragma once

#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "emin/sparse.hpp"

namespace emin {

enum class ProblemKind { rotated_anisotropic, oscillatory };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::rotated_anisotropic;
  Index n = 32;                              // mesh intervals per side
  double epsilon = 1.0;                      // anisotropy ratio
  double theta = 3.0 * std::numbers::pi / 16.0;  // rotation angle
  double K = 1.0;                            // oscillation magnitude

  void validate() const;
};

struct Problem {
  ProblemSpec spec;
  SparseMatrix matrix;                             // Dirichlet rows/columns removed
  std::vector<std::pair<double, double>> dof_coords;  // one (x, y) per unknown
  double h = 0.0;
};

// Linear finite elements on the unit square, every cell split along its
// (x_i, y_j)-(x_{i+1}, y_{j+1}) diagonal, homogeneous Dirichlet boundary.
Problem assemble_rotated_anisotropic(const ProblemSpec& spec);
Problem assemble_oscillatory(const ProblemSpec& spec);
Problem assemble(const ProblemSpec& spec);

// Stiffness matrix over all (n+1)^2 mesh nodes, before boundary
// elimination. Node (i, j) has index i + j*(n+1).
SparseMatrix assemble_stiffness_full(const ProblemSpec& spec);

} // namespace emin
