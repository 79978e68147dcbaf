#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mintau {

// Configuration and input errors map to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// The Prop-3.2 hypothesis tau < mu / (2 Mbar L) fails.
class DelayTooLargeError : public ConfigError {
public:
    DelayTooLargeError(double tau, double threshold)
        : ConfigError("delay too large: tau = " + std::to_string(tau) +
                      " >= mu/(2*Mbar*L) = " + std::to_string(threshold)),
          tau(tau), threshold(threshold) {}
    double tau;
    double threshold;
};

// Search tree would exceed the configured depth limit.
class BudgetError : public ConfigError {
public:
    explicit BudgetError(const std::string& msg) : ConfigError(msg) {}
};

class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

// Certification failures map to CLI exit code 1.
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& msg) : std::runtime_error(msg) {}
};

// No control in the family is inward with margin mu at the given point.
class PetrovViolationError : public CertificationError {
public:
    PetrovViolationError(std::vector<double> point, double achieved, double mu)
        : CertificationError("Petrov condition violated: best inner product " +
                             std::to_string(achieved) + " > -mu = " + std::to_string(-mu)),
          point(std::move(point)), achieved(achieved), mu(mu) {}
    std::vector<double> point;
    double achieved;
    double mu;
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mintau
