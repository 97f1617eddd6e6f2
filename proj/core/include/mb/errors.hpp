#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mb {

// Base class for every error thrown by the library. Expected failure modes
// (domain violations, infeasible contours, ...) all derive from this so
// callers can map them to diagnostics without catching std::exception.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Gamma evaluated at (or numerically too close to) a non-positive integer.
class PoleError : public Error {
public:
    using Error::Error;
};

// Magnitude overflows double range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Argument outside the supported region (branch cut, Lambda^2 <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Polylogarithm order outside 1..8.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

// A contour variable appears with |coefficient| != 1.
class MixedCoefficient : public Error {
public:
    using Error::Error;
};

// No straight vertical contour separates the pole families. Carries the
// textual form of the violated inequality subset for diagnostics.
class Infeasible : public Error {
public:
    Infeasible(const std::string& what, std::vector<std::string> violated)
        : Error(what), violated_(std::move(violated)) {}
    const std::vector<std::string>& violated() const { return violated_; }

private:
    std::vector<std::string> violated_;
};

// Integrand does not have the Gamma(l1+z)Gamma(l2+z)Gamma(l3-z)Gamma(l4-z) shape.
class PatternMismatch : public Error {
public:
    using Error::Error;
};

class NotASimplePole : public Error {
public:
    using Error::Error;
};

class MultiplePoleCollision : public Error {
public:
    using Error::Error;
};

class ContourInvalid : public Error {
public:
    using Error::Error;
};

class NoPinchDetected : public Error {
public:
    using Error::Error;
};

class ExtrapolationDiverged : public Error {
public:
    using Error::Error;
};

// Constraint on input parameters violated (e.g. eps1+eps2+eps3 != 0).
class ConstraintViolated : public Error {
public:
    using Error::Error;
};

class UniquenessViolated : public Error {
public:
    using Error::Error;
};

// A denominator Gamma of a constructed kernel sits on a pole.
class ConstructionPole : public Error {
public:
    using Error::Error;
};

// A result that must be real kept a non-negligible imaginary part.
class ImaginaryLeak : public Error {
public:
    using Error::Error;
};

class DegenerateBracket : public Error {
public:
    using Error::Error;
};

// Parse/validation failure in serialized objects or config files.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace mb
