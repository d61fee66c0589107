#pragma once

#include <stdexcept>
#include <string>

namespace liespec {

/// Bad input: wrong dimensions, malformed files, violated preconditions.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SingularMatrixError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A computation that could not finish within its configured limits
/// (certification cap, enumeration cap, disconnected net). Exit code 3.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace liespec
