#pragma once

#include <stdexcept>
#include <string>

namespace freqtrack {

// Precondition violations use std::invalid_argument. The types below cover
// the remaining failure classes the command line maps to exit codes.

/// Underflow, overflow or a non-finite criterion value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or inconsistent dimensions between inputs.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace freqtrack
