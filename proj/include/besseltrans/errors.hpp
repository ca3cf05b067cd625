#pragma once

#include <stdexcept>
#include <string>

namespace besseltrans {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iteration failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The particular solution u0 vanishes inside (0, b].
class UnsupportedPotentialError : public Error {
public:
    using Error::Error;
};

/// Coefficients would overflow binary64; `max_safe_order` is the largest usable order.
class RangeError : public Error {
public:
    RangeError(const std::string& what, int max_safe_order)
        : Error(what), max_safe_order_(max_safe_order) {}
    int max_safe_order() const noexcept { return max_safe_order_; }

private:
    int max_safe_order_;
};

/// A series was truncated before convergence; the partial value is kept.
class AccuracyLossError : public Error {
public:
    AccuracyLossError(const std::string& what, double partial_value)
        : Error(what), partial_value_(partial_value) {}
    double partial_value() const noexcept { return partial_value_; }

private:
    double partial_value_;
};

/// Problem definition violates a precondition (e.g. q(0) != 0 before normalization).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The minimax linear system could not be solved, even by least squares.
class SolveError : public Error {
public:
    using Error::Error;
};

/// Spectral parameter outside the supported region Lambda = lambda - q(0) > 0.
class SpectralRegionError : public Error {
public:
    using Error::Error;
};

}  // namespace besseltrans
