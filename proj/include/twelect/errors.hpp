#pragma once

#include <stdexcept>
#include <string>

namespace twelect {

// Process exit codes used by the CLI. Library code throws; main() maps.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kInputError = 3,
  kDegenerateEstimate = 4,
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A model produced no defined estimate (empty scope, zero allegiance mass,
// no countable voters, ...). Never silently replaced by 0.5.
struct UndefinedEstimateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twelect
