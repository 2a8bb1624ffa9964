#pragma once

#include <stdexcept>
#include <string>

namespace gapforge {

// Input exceeds a configured enumeration budget.  Every exponential oracle
// in the toolkit throws this instead of silently hanging.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched ambient dimensions or malformed linear-algebra arguments.
struct dimension_error : std::runtime_error {
    explicit dimension_error(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated a documented precondition.
struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// A structural invariant that the construction guarantees failed to hold;
// indicates a bug, never expected on valid inputs.
struct consistency_error : std::logic_error {
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

// Randomized construction exhausted its retry budget.
struct generation_error : std::runtime_error {
    explicit generation_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad file contents or malformed serialized data.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gapforge
