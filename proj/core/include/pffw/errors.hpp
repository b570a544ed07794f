#pragma once

#include <stdexcept>
#include <string>

namespace pffw {

// Shape disagreement between operands (vector lengths, matrix sides, ...).
struct DimMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// NaN or Inf reached a routine that requires finite input.
struct NonFinite : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Iterative eigensolver exhausted its budget without meeting tolerance.
struct EigFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveMu : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonPositiveRho : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Tracker averaging weight outside its admissible interval.
struct GammaOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Iteration index k < 1 handed to a schedule.
struct BadK : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Constraint stack with no rows/blocks.
struct EmptyStack : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Log-log fit window contains values <= 0.
struct NonPositiveValues : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input text (config files, edge lists, CSV, IDX).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (unknown keys, out-of-range knobs). CLI maps
// this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pffw
