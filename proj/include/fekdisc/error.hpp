#pragma once

#include <stdexcept>
#include <string>

namespace fekdisc {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments: wrong lengths, empty inputs, bad config values.
class InputError : public Error {
public:
    using Error::Error;
};

// Argument outside the set where the operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

// A documented hypothesis of an operation does not hold for the given data.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Iterative method stopped without meeting its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Fixed-point map observed to be non-contracting.
class ContractionError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fekdisc
