#pragma once

#include <stdexcept>
#include <string>

namespace gapprob {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested (regime, beta, xi, route) combination has no supported formula.
class CapabilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// ODE integration failed (blow-up, singular denominator, step underflow).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double location)
        : std::runtime_error(what), location_(location) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

/// Dense linear solve failed or was numerically singular.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace gapprob
