#pragma once

#include <stdexcept>
#include <string>

namespace driftlab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid numerical input (non-finite values, non-PSD covariances, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration (unknown keys, bad enum names, out-of-range settings).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// The argument of a step indicator has zero variance, so the indicator is
/// deterministic and the Gaussian identities for it do not apply.
class DegenerateIndicatorError : public DomainError {
 public:
  explicit DegenerateIndicatorError(const std::string& msg) : DomainError(msg) {}
};

/// A requested vector configuration cannot be realized (infeasible Gram matrix,
/// not enough dimensions, ...).
class ConstructionError : public Error {
 public:
  explicit ConstructionError(const std::string& msg) : Error(msg) {}
};

/// A root bracket does not contain a sign change.
class BracketError : public Error {
 public:
  explicit BracketError(const std::string& msg) : Error(msg) {}
};

}  // namespace driftlab
