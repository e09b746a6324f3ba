#pragma once

#include <stdexcept>
#include <string>

namespace mepcs {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A scalar argument is malformed (non-finite input, b < 1, lo >= hi, ...).
struct InvalidInput : Error {
    using Error::Error;
};

// A value falls outside the declared source interval.
struct DomainError : Error {
    using Error::Error;
};

// Dimension / order / alphabet mismatch between two objects.
struct ShapeError : Error {
    using Error::Error;
};

// Sequence too short for the requested block order.
struct InsufficientData : Error {
    using Error::Error;
};

// An enumeration guard was exceeded (alphabet, block space, search space).
struct TooLarge : Error {
    using Error::Error;
};

// An iterative numeric routine failed to converge.
struct NumericError : Error {
    using Error::Error;
};

// A model or experiment description is inconsistent.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace mepcs
