#pragma once

#include <stdexcept>
#include <string>

namespace abwave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments and mathematically excluded inputs.
class DomainError : public Error {
public:
    using Error::Error;
};

// |dtheta| = pi: the kernel is not conormal there.
class ExcludedDirectionError : public DomainError {
public:
    using DomainError::DomainError;
};

// Probe geometry that cannot separate the two fronts, bands outside the window.
class ConfigurationError : public DomainError {
public:
    using DomainError::DomainError;
};

// Non-Friedrichs input to the boundary functionals.
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_bound)
        : Error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const { return best_estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

class TailOverflowError : public AccuracyError {
public:
    TailOverflowError(const std::string& what, double tail, int suggested_k_max)
        : AccuracyError(what, 0.0, tail), suggested_k_max_(suggested_k_max) {}

    int suggested_k_max() const { return suggested_k_max_; }

private:
    int suggested_k_max_;
};

class FitError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

// Trapezoid grid too coarse for the requested angular mode.
class AliasingError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace abwave
