#ifndef GSNCOP_ERRORS_HPP
#define GSNCOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gsncop {

/// Bad run configuration (unknown keys, invalid option values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data (CSV parse failures, bad clusters).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure that must not pass silently (overflow, divergence).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Matrix factorization failure (non positive definite input).
class FactorizationError : public NumericError {
public:
    explicit FactorizationError(const std::string& msg) : NumericError(msg) {}
};

} // namespace gsncop

#endif
