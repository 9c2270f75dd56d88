#pragma once

#include <cstdint>
#include <random>

#include "emin/dense.hpp"

namespace emin {

// Seeded generator whose output does not depend on the standard library's
// distribution implementations (the engine itself is fully specified).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Index below(Index n) { return static_cast<Index>(uniform() * static_cast<double>(n)); }

  Vector uniform_vector(Index n, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  std::mt19937_64& engine() noexcept { return engine_; }

private:
  std::mt19937_64 engine_;
};

} // namespace emin
