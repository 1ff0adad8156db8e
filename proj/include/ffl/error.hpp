#pragma once

#include <stdexcept>
#include <string>

namespace ffl {

/// Base of every error raised by the library. The CLI maps subclasses to
/// exit codes: ResourceError -> 3, InvariantViolation -> 4, the rest -> 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NotInvertible : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Refusal to run because a resource or feasibility bound would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class WindowMismatch : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

/// A computed result contradicts a proven bound (Hasse, census sums, ...).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace ffl
