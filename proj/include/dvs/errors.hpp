#pragma once

#include <stdexcept>
#include <string>

namespace dvs {

/// A task, task system or generator parameter violates its invariants.
class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested configuration needs a speed above s_max = 1.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A trace or arrival sequence is structurally broken.
class MalformedTrace : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration file, bad flag, or I/O failure.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dvs
