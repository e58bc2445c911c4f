#pragma once

#include <stdexcept>
#include <string>

namespace levykernel {

/// Base class for every numeric failure raised by the library.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Gamma evaluated within the pole tolerance of a nonpositive integer.
class PoleHit : public NumericError {
public:
    using NumericError::NumericError;
};

/// Integrand magnitude does not decrease along the vertical line.
class NoDecay : public NumericError {
public:
    using NumericError::NumericError;
};

/// Refinement or acceleration failed to reach the requested tolerance.
class NonConvergent : public NumericError {
public:
    using NumericError::NumericError;
};

/// Contour abscissa or Mellin argument outside its admissible strip.
class StripViolation : public NumericError {
public:
    using NumericError::NumericError;
};

/// Parameters outside the domain where a method is valid.
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Derivative order beyond what a symbol provides.
class OrderExceeded : public NumericError {
public:
    using NumericError::NumericError;
};

/// Leading-term formula requested for the wrong parity of beta.
class ParityError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace levykernel
