#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psynorms {

// Bad input data: malformed files, out-of-range values, missing resources.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}

    DataError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

// Rank deficiency, non-finite intermediate results.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Unknown names, bad configuration, bad flag combinations.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace psynorms
