#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace pencil {

/// Caller broke a documented precondition (bad window, out-of-range parameter).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures of the numerics rather than of the input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value left the representable floating-point range.
class NumericRangeError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Evaluation requested at sin(zeta) = 0, a pole of the scattering coefficients.
class PoleError : public NumericError {
public:
    using NumericError::NumericError;
};

/// lambda = +-2, where dz/dlambda is singular.
class BranchPointError : public NumericError {
public:
    using NumericError::NumericError;
};

/// The resolvent was requested at (or numerically at) a zero of Phi.
class SpectralPointError : public NumericError {
public:
    SpectralPointError(const std::string& what, std::optional<std::complex<double>> nearest)
        : NumericError(what), nearest_zero(nearest) {}

    std::optional<std::complex<double>> nearest_zero;
};

/// Root localization could not produce a consistent answer.
class RootFindingError : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace pencil
