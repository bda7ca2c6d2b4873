#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitting {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid construction arguments (wrong part count, length mismatch, ...).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// The operation is not defined for this object (e.g. adjoint of an opaque step).
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

// A documented contract of an argument was checked and found violated.
class ContractViolation : public Error {
public:
    using Error::Error;
};

// A precondition on numerical values does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Coefficient-form conversion is impossible for this input.
class ConversionError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Orbit type not handled by an exact propagator (e.g. unbound Kepler orbit).
class UnsupportedOrbitError : public DomainError {
public:
    using DomainError::DomainError;
};

// Evaluation hit a singular point (r = 0 in a central force).
class SingularityError : public Error {
public:
    using Error::Error;
};

// An iterative numerical procedure failed to converge.
class NumericError : public Error {
public:
    using Error::Error;
};

// A statistical fit could not produce a meaningful answer.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

// A method violates consistency (sum of coefficients != 1).
class InconsistentMethodError : public Error {
public:
    using Error::Error;
};

// Parse or invariant failure on a serialized object; carries the offending field.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Non-finite value produced during time stepping. Carries the last finite
// state and the index of the step that produced the non-finite value.
class OverflowError : public Error {
public:
    OverflowError(const std::string& message, std::vector<double> last_finite, std::size_t step)
        : Error(message), last_finite_(std::move(last_finite)), step_(step) {}
    const std::vector<double>& last_finite_state() const noexcept { return last_finite_; }
    std::size_t step_index() const noexcept { return step_; }

private:
    std::vector<double> last_finite_;
    std::size_t step_;
};

}  // namespace splitting
