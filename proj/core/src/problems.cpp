#include "emin/problems.hpp"

#include <array>
#include <cmath>

#include "emin/error.hpp"

namespace emin {

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::rotated_anisotropic ? "rotated_anisotropic" : "oscillatory";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "rotated_anisotropic" || name == "anisotropic") return ProblemKind::rotated_anisotropic;
  if (name == "oscillatory") return ProblemKind::oscillatory;
  throw ConfigError("unknown problem kind '" + name + "'");
}

void ProblemSpec::validate() const {
  if (n < 2) throw ConfigError("problem: n must be at least 2");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("problem: epsilon must lie in [0,1]");
  if (!(K > 0.0)) throw ConfigError("problem: K must be positive");
}

namespace {

using Tensor = std::array<double, 4>;  // row-major 2x2

Tensor rotated_tensor(double epsilon, double theta) {
  // Q^T D Q with Q = [c -s; s c], D = diag(1, epsilon).
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double off = (epsilon - 1.0) * c * s;
  return {c * c + epsilon * s * s, off, off, s * s + epsilon * c * c};
}

struct Node {
  Index i;
  Index j;
};

// Element stiffness of a P1 triangle with constant tensor k.
std::array<std::array<double, 3>, 3> element_stiffness(const std::array<Node, 3>& v, double h,
                                                       const Tensor& k) {
  std::array<double, 3> x{}, y{};
  for (int a = 0; a < 3; ++a) {
    x[a] = static_cast<double>(v[a].i) * h;
    y[a] = static_cast<double>(v[a].j) * h;
  }
  const double det = (x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]);
  const double area = 0.5 * std::abs(det);
  std::array<double, 3> gx{}, gy{};
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    gx[a] = (y[b] - y[c]) / det;
    gy[a] = (x[c] - x[b]) / det;
  }
  std::array<std::array<double, 3>, 3> ke{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double kgx = k[0] * gx[b] + k[1] * gy[b];
      const double kgy = k[2] * gx[b] + k[3] * gy[b];
      ke[a][b] = area * (gx[a] * kgx + gy[a] * kgy);
    }
  return ke;
}

double oscillatory_coefficient(Index i, Index j, double big) {
  return ((i + j) % 2 == 1) ? big : 1.0;
}

template <class TensorFn>
SparseMatrix assemble_full(Index n, TensorFn tensor_for) {
  const double h = 1.0 / static_cast<double>(n);
  const Index side = n + 1;
  std::vector<Triplet> triplets;
  triplets.reserve(2 * n * n * 9);
  auto id = [side](const Node& v) { return v.i + v.j * side; };
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const std::array<std::array<Node, 3>, 2> tris{{
          {Node{i, j}, Node{i + 1, j}, Node{i + 1, j + 1}},
          {Node{i, j}, Node{i + 1, j + 1}, Node{i, j + 1}},
      }};
      for (const auto& tri : tris) {
        const auto ke = element_stiffness(tri, h, tensor_for(tri));
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) triplets.push_back({id(tri[a]), id(tri[b]), ke[a][b]});
      }
    }
  }
  return csr_from_triplets(triplets, side * side, side * side);
}

Problem eliminate_boundary(const ProblemSpec& spec, const SparseMatrix& full) {
  const Index n = spec.n;
  const Index side = n + 1;
  const double h = 1.0 / static_cast<double>(n);
  Problem p;
  p.spec = spec;
  p.h = h;
  std::vector<Index> interior;
  interior.reserve((n - 1) * (n - 1));
  for (Index j = 1; j < n; ++j)
    for (Index i = 1; i < n; ++i) {
      interior.push_back(i + j * side);
      p.dof_coords.emplace_back(static_cast<double>(i) * h, static_cast<double>(j) * h);
    }
  p.matrix = drop_small(submatrix(full, interior, interior));
  return p;
}

} // namespace

SparseMatrix assemble_stiffness_full(const ProblemSpec& spec) {
  spec.validate();
  if (spec.kind == ProblemKind::rotated_anisotropic) {
    const Tensor k = rotated_tensor(spec.epsilon, spec.theta);
    return assemble_full(spec.n, [&](const std::array<Node, 3>&) { return k; });
  }
  const double big = spec.K;
  return assemble_full(spec.n, [big](const std::array<Node, 3>& tri) {
    // One-point quadrature of the linearly interpolated nodal coefficient.
    double f = 0.0;
    for (const Node& v : tri) f += oscillatory_coefficient(v.i, v.j, big);
    f /= 3.0;
    return Tensor{f, 0.0, 0.0, f};
  });
}

Problem assemble_rotated_anisotropic(const ProblemSpec& spec) {
  if (spec.kind != ProblemKind::rotated_anisotropic)
    throw ConfigError("assemble_rotated_anisotropic: wrong problem kind");
  return eliminate_boundary(spec, assemble_stiffness_full(spec));
}

Problem assemble_oscillatory(const ProblemSpec& spec) {
  if (spec.kind != ProblemKind::oscillatory)
    throw ConfigError("assemble_oscillatory: wrong problem kind");
  return eliminate_boundary(spec, assemble_stiffness_full(spec));
}

Problem assemble(const ProblemSpec& spec) {
  return spec.kind == ProblemKind::rotated_anisotropic ? assemble_rotated_anisotropic(spec)
                                                       : assemble_oscillatory(spec);
}

} // namespace emin
