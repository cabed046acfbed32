#pragma once

#include <stdexcept>
#include <string>

namespace mteq {

/// Operand sizes disagree (tensor dimension vs vector length, etc.).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A map was evaluated outside its domain, e.g. a non-positive y for f(y).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by lu_solve when a pivot falls below the singularity threshold.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mteq
