#pragma once

#include <stdexcept>
#include <string>

namespace stochq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad parameter, out-of-range value).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A computation would exceed a hard size cap. `achieved` carries the best
/// value reached before giving up (a tail mass, a deviation, ...).
class ResourceError : public Error {
public:
  ResourceError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

private:
  double achieved_;
};

/// A numerical consistency check failed (non-convergence, lost positivity,
/// residual imaginary parts, overflow).
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace stochq
