#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emin {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Shapes or lengths that do not conform.
class DimensionError : public Error {
public:
  using Error::Error;
};

// Malformed input to a constructor (out-of-range index, bad invariant).
class ConstructionError : public Error {
public:
  using Error::Error;
};

// A factorization or solve met a singular or indefinite operator.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

// Symmetric input expected but not found.
class NotSymmetricError : public Error {
public:
  using Error::Error;
};

// Iterative method produced non-finite values or lost positivity.
class BreakdownError : public Error {
public:
  BreakdownError(const std::string& what, std::size_t iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

private:
  std::size_t iteration_;
};

// Candidate vectors are linearly dependent in the A-inner product.
class DependentVectorError : public Error {
public:
  using Error::Error;
};

// Interpolation constraint W B_c = B_f cannot be met on some row.
class InfeasibleConstraintError : public Error {
public:
  using Error::Error;
};

// Weighted-system diagonal has a zero (or non-finite) denominator.
class DegenerateWeightError : public Error {
public:
  using Error::Error;
};

// Coarsening failed to reduce the number of unknowns.
class StagnationError : public Error {
public:
  using Error::Error;
};

// Bad configuration (CLI flags, JSON config, problem kind).
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace emin
