#pragma once

#include <stdexcept>
#include <string>

namespace chenrecip {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: mismatched alphabets, bad lattice, bad polynomial, ...
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A path or evaluation point comes too close to a pole of some form.
class PoleProximity : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not reach the requested tolerance.
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// A theorem-specific precondition (disjoint poles, grouped layout, ...) fails.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace chenrecip
