#pragma once

#include <stdexcept>
#include <string>

namespace gatelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (non-unitary gate, bad index,
/// malformed file, ...). The message names the violated check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine (eigensolver, Schur decomposition) did not produce a
/// trustworthy result.
class DiagnosticsError : public Error {
 public:
  using Error::Error;
};

/// Accumulated round-off pushed an iterated product out of tolerance.
class NumericalDegradationError : public Error {
 public:
  using Error::Error;
};

}  // namespace gatelab
