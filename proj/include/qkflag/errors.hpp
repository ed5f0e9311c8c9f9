#pragma once

#include <stdexcept>
#include <string>

namespace qkflag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (bad exponent,
/// unknown variable, non-invariant polynomial, malformed shape).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured size limit was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Quotient rank differs from the expected count, or is infinite.
class RankError : public Error {
 public:
  RankError(const std::string& what, long observed, long expected)
      : Error(what), observed_(observed), expected_(expected) {}
  long observed() const noexcept { return observed_; }
  long expected() const noexcept { return expected_; }

 private:
  long observed_;
  long expected_;
};

/// Two presentations that should agree do not.
class PresentationMismatch : public Error {
 public:
  using Error::Error;
};

/// Repeated equivariant parameters where distinct ones are required.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Homotopy path tracking failed.
class PathError : public Error {
 public:
  PathError(const std::string& what, double last_good_t)
      : Error(what), last_good_t_(last_good_t) {}
  double last_good_t() const noexcept { return last_good_t_; }

 private:
  double last_good_t_;
};

/// Two collections that must have matching shapes do not.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qkflag
