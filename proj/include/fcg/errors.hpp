#pragma once

#include <stdexcept>
#include <string>

namespace fcg {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes, so new kinds should derive from the most specific base.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value fell outside the domain of a transform (e.g. log1p at x <= -1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A value fell outside the range of a transform, so no inverse exists.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Two objects indexed by different state spaces were combined.
class SpaceMismatch : public Error {
public:
    using Error::Error;
};

/// The LP solver failed to reach a verdict within tolerance.
class SolverFailure : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the simulation mode (e.g. growth rates of an
/// additive ensemble).
class ModeError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or spec string. Carries the location when known.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace fcg
