#pragma once

#include <stdexcept>
#include <string>

namespace aucopt {

/// Numeric input outside the function's domain (non-finite, out of range).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A pairwise loss was asked to run on a batch missing one of the two classes.
struct EmptyClassError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A metric is undefined for the given data (e.g. no evaluable group).
struct UndefinedMetricError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent or out-of-range configuration values.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A documented call precondition was broken (shape mismatch, ungrouped batch).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Malformed or unreadable/unwritable file.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values produced mid-computation; training aborts with this.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace aucopt
