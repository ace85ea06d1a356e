#pragma once

#include <stdexcept>
#include <string>

namespace lsprt {

// Base of every error the library throws. The CLI maps each subclass onto a
// distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or configuration value (bad targets, empty grids, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or unreadable input files.
class DataError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// No strictly feasible coefficient vector exists or could be found.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Evaluation outside the open domain of the cost (non-positive divergence).
class DomainError : public Error {
public:
    using Error::Error;
};

// A sequential run could not produce a usable result (non-finite score,
// every trial truncated, ...).
class RunError : public Error {
public:
    using Error::Error;
};

} // namespace lsprt
