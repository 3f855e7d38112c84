#pragma once

#include <stdexcept>
#include <string>

namespace ratchet {

// Process exit codes shared by the CLI and the verification driver.
enum ExitCode {
    exit_ok = 0,
    exit_usage = 1,
    exit_verification = 2,
    exit_numerical = 3,
};

// Bad flags, bad config keys, malformed numbers.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// NaN/Inf detected mid-computation.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ratchet
