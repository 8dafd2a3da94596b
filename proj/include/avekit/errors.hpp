#pragma once

#include <stdexcept>
#include <string>

namespace avekit {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A constructor or generator was handed values outside its admissible range.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Matrix is singular to working precision.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// An iterative kernel failed to converge within its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A mathematical precondition (e.g. sigma_min(A) > 1) does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Bad experiment configuration (unknown key, missing section, bad value).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written, or has an unexpected format.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace avekit
