#pragma once

#include <stdexcept>
#include <string>

namespace hheat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a function (e.g. T <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A problem definition failed validation. The message carries the first error.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A config document could not be parsed or contains unknown keys.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Matrix shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// The steady-state linear system is singular, so the steady state is not unique.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// The solver finished but its result violates the residual bound or did not converge.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared while integrating.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time)
        : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// A physical invariant of an input state is broken (negative occupation, etc).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace hheat
