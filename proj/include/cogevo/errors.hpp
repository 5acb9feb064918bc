#pragma once

#include <stdexcept>
#include <string>

namespace cogevo {

// Error taxonomy maps onto CLI exit codes:
//   ConfigError -> 1, DataError -> 2, InvariantError -> 3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

// A metric whose preconditions fail (single-class AUC, empty denominator).
// Reports carry these as "n/a" rather than sentinel numbers.
struct UndefinedMetricError : std::runtime_error {
    explicit UndefinedMetricError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cogevo
