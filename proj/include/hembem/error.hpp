#pragma once

#include <stdexcept>
#include <string>

namespace hembem {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: configuration values, mesh/traction mismatch, bad scaling.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Floating point breakdown (NaN, failed factorization, quadrature trouble).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A quadratic form that should be positive was not.
class DiagnosticsError : public Error {
public:
    using Error::Error;
};

/// Iterative solver hit its iteration cap.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace hembem
