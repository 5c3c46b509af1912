#pragma once

#include <stdexcept>
#include <string>

namespace bathy {

// Invalid configuration values or inputs that violate a type invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller misuse: shape mismatches, incompatible grids, bad arguments.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Query outside the sampled range (no extrapolation anywhere).
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed input file. The message carries file and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solver blow-up, loss of positivity, non-finite values, singular systems.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bathy
