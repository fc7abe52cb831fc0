#pragma once

#include <stdexcept>
#include <string>

namespace eigengrad {

/// Thrown when inputs are syntactically valid but mathematically
/// inconsistent (e.g. lambda + K < 0 where the theory guarantees
/// lambda + K >= 0), or when an iterative scheme fails to converge.
/// Distinct from std::invalid_argument, which signals API misuse.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace eigengrad
