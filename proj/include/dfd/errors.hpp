#pragma once

#include <stdexcept>
#include <string>

namespace dfd {

// Bad input: malformed files, unknown names, violated preconditions. Exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failure while computing: divergence, degenerate numerics. Exit code 2.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dfd
