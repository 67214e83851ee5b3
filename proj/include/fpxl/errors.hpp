#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpxl {

/// Base class for all library errors. Validation failures derive from it so
/// callers can distinguish bad inputs from numerical non-convergence.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A variable exponent violates the admissible bounds
/// (1 < inf p <= sup p < inf, p symmetric, 1 < inf r <= sup r < inf p).
class ExponentOutOfRange : public Error {
 public:
  ExponentOutOfRange(std::string what, std::size_t i, std::size_t j, double value)
      : Error(std::move(what)), node_i(i), node_j(j), offending_value(value) {}

  std::size_t node_i;
  std::size_t node_j;  // == node_i for one-point exponents
  double offending_value;
};

/// Fractional order s outside (0,1).
class InvalidOrder : public Error {
 public:
  using Error::Error;
};

/// Domain descriptor yields no nodes.
class EmptyMesh : public Error {
 public:
  using Error::Error;
};

/// Luxemburg bracket expansion exceeded its doubling budget; the modular
/// never crossed 1, which signals a non-finite modular evaluation.
class BracketFailure : public Error {
 public:
  BracketFailure(std::string what, double lastLambda, double lastModular)
      : Error(std::move(what)), last_lambda(lastLambda), last_modular(lastModular) {}

  double last_lambda;
  double last_modular;
};

/// Iterative solve ran out of iterations. Carries the best iterate so the
/// caller can inspect or report it.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(std::string what, std::vector<double> best, double residual, int iterations)
      : Error(std::move(what)),
        best_iterate(std::move(best)),
        best_residual(residual),
        iterations(iterations) {}

  std::vector<double> best_iterate;
  double best_residual;
  int iterations;
};

/// Degree computation: the target is not certifiably away from the image of
/// the region boundary.
class BoundaryHit : public Error {
 public:
  BoundaryHit(std::string what, double distance, double threshold)
      : Error(std::move(what)), distance(distance), threshold(threshold) {}

  double distance;
  double threshold;
};

/// Adaptive boundary refinement exceeded its sample budget.
class RefinementLimit : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fpxl
