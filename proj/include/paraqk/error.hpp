#pragma once

#include <stdexcept>
#include <string>

namespace paraqk {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (mismatched algebra, wrong valence, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (order cap, unknown fixture, sampler starvation).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Point outside the admissible domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible is (numerically) singular.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A standing assumption of the construction fails (sign of f, f1, ...).
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

/// Transversality or embedding failure.
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace paraqk
