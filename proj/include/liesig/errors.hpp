#pragma once

#include <stdexcept>
#include <string>

namespace liesig {

/// Two operands live in incompatible spaces (ambient dimension, truncation
/// level, group spec or sequence length disagree).
class DimensionMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A rotation within the antipodal cutoff of angle pi was passed to the
/// logarithm; no unique nearest logarithm exists there.
class AntipodalRotationError : public std::domain_error {
public:
  explicit AntipodalRotationError(const std::string& what, int step = -1)
      : std::domain_error(what), step_index(step) {}

  /// Index of the offending step when raised from a path derivative,
  /// -1 otherwise.
  int step_index;
};

/// Materializing a dense tensor level would exceed the coefficient budget.
class BudgetExceededError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document or CSV.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace liesig
