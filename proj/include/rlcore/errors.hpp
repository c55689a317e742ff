#pragma once

#include <stdexcept>
#include <string>

namespace rlcore {

/// Shape or dimension disagreement between tensors, layers or environments.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values (NaN/Inf) where finite values are required.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user configuration: unknown key, bad type, out-of-range value.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File I/O and serialization failures (missing file, bad magic, version).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rlcore
