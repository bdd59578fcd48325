#pragma once

#include <stdexcept>
#include <string>

namespace didq {

/// Bad input: malformed data, violated precondition, unknown config key.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed a configured size cap (materialization,
/// enumeration).
class CapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A numerical self-check failed (non-convergence, violated invariant).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace didq
