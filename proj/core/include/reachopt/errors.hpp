#pragma once

#include <stdexcept>
#include <string>

namespace reachopt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch between an argument and the object it is applied to.
struct ShapeError : Error {
  using Error::Error;
};

/// Not enough input data to fit a model (e.g. fewer than two demonstrations).
struct InsufficientDataError : Error {
  using Error::Error;
};

/// An index argument is outside its valid range.
struct IndexError : Error {
  using Error::Error;
};

/// Iterative solver failed to reach its target residual.
struct NoConvergenceError : Error {
  double best_residual;
  NoConvergenceError(const std::string& what, double residual)
      : Error(what), best_residual(residual) {}
};

/// Non-finite value encountered inside an optimizer loop.
struct NumericalError : Error {
  int iteration;
  NumericalError(const std::string& what, int iter) : Error(what), iteration(iter) {}
};

/// Malformed configuration or scenario file; message carries file and line.
struct ParseError : Error {
  using Error::Error;
};

/// Pipeline initialization failed (e.g. an IK-infeasible via-point).
struct InitializationError : Error {
  using Error::Error;
};

/// A metric was requested on a scene where it is undefined.
struct UndefinedMetricError : Error {
  using Error::Error;
};

}  // namespace reachopt
