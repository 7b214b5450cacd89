#pragma once

#include <stdexcept>
#include <string>

namespace threebody {

/// Base of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration (CLI exit code 2).
struct ArgumentError : Error {
  using Error::Error;
};

/// Requested operation is not defined for the given inputs, e.g. the
/// equal-mass symmetry set for unequal masses (CLI exit code 2).
struct UnsupportedError : Error {
  using Error::Error;
};

/// Two (or three) bodies coincide where a formula needs them apart
/// (CLI exit code 3). Bodies are 1-based; j < 0 marks triple collision.
struct CollisionError : Error {
  CollisionError(const std::string& what, int body_i, int body_j)
      : Error(what), i(body_i), j(body_j) {}
  int i;
  int j;
};

/// Shape-space formula evaluated at the cone point or on a binary collision
/// ray (CLI exit code 3).
struct SingularityError : Error {
  using Error::Error;
};

/// An iteration failed to reach its tolerance (CLI exit code 3).
struct ConvergenceError : Error {
  using Error::Error;
};

/// File system failure, reported with path context (CLI exit code 4).
struct IoError : Error {
  using Error::Error;
};

}  // namespace threebody
