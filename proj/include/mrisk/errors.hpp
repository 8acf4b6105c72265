#pragma once

#include <stdexcept>
#include <string>

namespace mrisk {

/// Base of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parameter outside its admissible range (alpha, beta, ...).
struct DomainError : Error {
  using Error::Error;
};

/// Vector lengths that do not agree with the probability space.
struct DimensionError : Error {
  using Error::Error;
};

/// A value object failed its construction-time invariants.
struct ValidationError : Error {
  using Error::Error;
};

/// A one-dimensional search ran past its bracket cap without resolving.
struct UnboundedError : Error {
  using Error::Error;
};

/// No feasible threshold exists inside the search bracket.
struct InfeasibleError : Error {
  using Error::Error;
};

}  // namespace mrisk
