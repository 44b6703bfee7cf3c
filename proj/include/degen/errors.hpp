#pragma once

#include <stdexcept>
#include <string>

namespace degen {

/// A stated precondition of an operation does not hold for the given inputs.
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the mathematical domain of the function.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// The grid is too coarse to represent the requested object.
struct resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric routine failed to converge or produced an inconsistent state.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem / output failures (CLI exit code 4).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace degen
