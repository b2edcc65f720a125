#pragma once

#include <stdexcept>
#include <string>

namespace cqnc {

// Raised for malformed configuration input (bad JSON, schema violations,
// inconsistent parameter sets). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

// Raised when the numerics break down (resolvent singular on the grid,
// force signal destroyed by total loss). Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace cqnc
