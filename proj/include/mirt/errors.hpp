#pragma once

#include <stdexcept>
#include <string>

namespace mirt {

// Contract violations on library calls: bad parameters, dimension mismatches.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input files; message names the offending line/entity.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-convergence, degenerate surfaces, existence violations and similar
// run-time numerical failures.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mirt
