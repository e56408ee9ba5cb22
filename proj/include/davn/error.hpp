#pragma once

#include <stdexcept>
#include <string>

namespace davn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model-domain failure: the inputs are well formed but describe
/// something the model cannot evaluate (instability, degenerate geometry).
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public DomainError {
public:
    using DomainError::DomainError;
};

class DegenerateGeometry : public DomainError {
public:
    using DomainError::DomainError;
};

/// Raised when a link has zero achievable rate.
class ZeroCapacity : public DomainError {
public:
    using DomainError::DomainError;
};

class UnstableQueue : public DomainError {
public:
    UnstableQueue(double rho_high, double rho_low)
        : DomainError("unstable queue: rho1=" + std::to_string(rho_high) +
                      " rho1+rho2=" + std::to_string(rho_high + rho_low) + " (must be < 1)"),
          rho_high_(rho_high), rho_low_(rho_low) {}

    double rho_high() const noexcept { return rho_high_; }
    double rho_low() const noexcept { return rho_low_; }

private:
    double rho_high_;
    double rho_low_;
};

/// Input/output and configuration failures (exit code 1 at the CLI).
class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IngestionError : public IoError {
public:
    IngestionError(std::size_t line, const std::string& what)
        : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace davn
