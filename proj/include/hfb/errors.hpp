#pragma once

#include <stdexcept>
#include <string>

namespace hfb {

/// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid or stencil cannot be formed at the requested size.
struct SizingError : Error {
  using Error::Error;
};

/// Operator derivative requested at a kink (eta = 0 at M = 0).
struct SingularPointError : Error {
  using Error::Error;
};

/// Gradient of the energy requested in a nondifferentiable configuration.
struct NondifferentiableError : Error {
  using Error::Error;
};

/// A non-finite value appeared mid-computation; carries the offending node.
struct NumericOverflowError : Error {
  int node;
  NumericOverflowError(const std::string& what, int node_idx)
      : Error(what), node(node_idx) {}
};

/// Bad run configuration (unknown key, out-of-range value, malformed file).
struct ConfigError : Error {
  using Error::Error;
};

/// A test-function or deformation support disk violates its placement rules.
struct PlacementError : Error {
  using Error::Error;
};

/// Density threshold must be positive.
struct ThresholdError : Error {
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. negative density).
struct DomainError : Error {
  using Error::Error;
};

/// Pushforward fixed point failed to contract.
struct DeformationError : Error {
  using Error::Error;
};

/// An operation that needs a level curve found none.
struct EmptyCurveError : Error {
  using Error::Error;
};

}  // namespace hfb
