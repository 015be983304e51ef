#pragma once

#include <stdexcept>
#include <string>

namespace stsa {

// Bad or unsupported input data (files, signals, lengths).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (parameter constraints, geometry).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-convergence, overflow, iteration cap).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace stsa
