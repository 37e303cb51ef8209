#pragma once

#include <stdexcept>

namespace spdeconv {

/// Malformed specification strings or inconsistent options.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad file content or data that violates an operation's contract
/// (malformed headers, size mismatches, negative counts, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Divergence, exhausted line search, non-finite iterates.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace spdeconv
