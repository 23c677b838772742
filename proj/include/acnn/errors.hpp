#pragma once

#include <stdexcept>
#include <string>

namespace acnn {

// Malformed or missing input data (dataset files, vector files, archives).
// The CLI maps this to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration: bad hyperparameters, dimension mismatches.
// The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-finite loss, failed gradient check.
// The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acnn
