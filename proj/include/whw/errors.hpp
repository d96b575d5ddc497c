#pragma once

#include <stdexcept>
#include <string>

namespace whw {

// Thrown by solve_resolvent when the coupling matrix is numerically singular,
// i.e. the shift sits too close to an eigenvalue.
class SingularCoupling : public std::runtime_error {
public:
    explicit SingularCoupling(const std::string& msg) : std::runtime_error(msg) {}
};

// A quadrature rule with too few panels for the requested frequency.
class RuleTooCoarse : public std::runtime_error {
public:
    RuleTooCoarse(int required, int got)
        : std::runtime_error("quadrature rule too coarse: need " + std::to_string(required) +
                             " panels per unit, got " + std::to_string(got)),
          required_panels(required) {}
    int required_panels;
};

// Exponential factors in the requested determinant/matrix form would overflow.
class OverflowBudget : public std::runtime_error {
public:
    explicit OverflowBudget(const std::string& msg) : std::runtime_error(msg) {}
};

class ContourThroughZero : public std::runtime_error {
public:
    explicit ContourThroughZero(const std::string& msg) : std::runtime_error(msg) {}
};

class NonIntegerWinding : public std::runtime_error {
public:
    explicit NonIntegerWinding(const std::string& msg) : std::runtime_error(msg) {}
};

class ClearanceViolation : public std::runtime_error {
public:
    ClearanceViolation(double s_offending, double value)
        : std::runtime_error("imaginary-axis clearance violated at s = " + std::to_string(s_offending) +
                             " (|det| = " + std::to_string(value) + ")"),
          s(s_offending) {}
    double s;
};

// Initial-data profile violates a D(A) constraint; 'which' names the constraint.
class ProfileViolatesDomain : public std::runtime_error {
public:
    explicit ProfileViolatesDomain(const std::string& which)
        : std::runtime_error("profile violates domain constraint: " + which), constraint(which) {}
    std::string constraint;
};

class ReflectionSeam : public std::runtime_error {
public:
    explicit ReflectionSeam(const std::string& msg) : std::runtime_error(msg) {}
};

class ShiftNearSpectrum : public std::runtime_error {
public:
    explicit ShiftNearSpectrum(const std::string& msg) : std::runtime_error(msg) {}
};

class NoConvergence : public std::runtime_error {
public:
    explicit NoConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

class FactorizationFailure : public std::runtime_error {
public:
    explicit FactorizationFailure(const std::string& msg) : std::runtime_error(msg) {}
};

class InsufficientPoints : public std::runtime_error {
public:
    explicit InsufficientPoints(const std::string& msg) : std::runtime_error(msg) {}
};

class EnergyUnderflow : public std::runtime_error {
public:
    explicit EnergyUnderflow(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace whw
