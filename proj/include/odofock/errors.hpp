#pragma once

#include <stdexcept>
#include <string>

namespace odofock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Word longer than the truncation level, or index outside the space.
class LevelOverflowError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

/// An operation was called on input that violates its stated precondition
/// (non-isometric symbol, non-pure tuple, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// The requested truncation level leaves no room for an exact computation.
class WindowError : public Error {
public:
  using Error::Error;
};

/// Dilation residual too large for the requested truncation.
class DilationInexactError : public Error {
public:
  DilationInexactError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Malformed external input (JSON schema, non-finite numbers, bad letters).
class InputError : public Error {
public:
  using Error::Error;
};

}  // namespace odofock
