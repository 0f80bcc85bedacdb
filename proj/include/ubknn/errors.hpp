#pragma once

#include <stdexcept>
#include <string>

namespace ubknn {

/// Invalid parameters, bounds violations, malformed run configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Problems with input data: missing files, bad rows, degenerate datasets.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ubknn
