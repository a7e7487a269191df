#pragma once

#include <stdexcept>
#include <string>

namespace xit {

/// Precondition or input validation failure.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File could not be read, written or decoded.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A statistic is undefined for the supplied data (zero variance, rank
/// deficiency, ...).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace xit
