#ifndef KINKERNEL_TYPES_HPP
#define KINKERNEL_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace kinkernel {

/// Thrown when an argument violates an operation's precondition
/// (non-finite input, parameter outside the admissible range, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Thrown when a quadrature fails to reach the requested tolerance.
/// Carries the partial value and the error estimate at the point of failure.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, double partial, double estimate)
        : std::runtime_error(msg), partialValue(partial), errorEstimate(estimate) {}
    double partialValue;
    double errorEstimate;
};

/// s-regime relative to the special orders 1/4 and 3/4.
enum class SRegime { Low, Quarter, Mid, ThreeQuarter, High };

/// Diffusion order s in (0,1) with the derived exponents used throughout:
/// 2s (symbol homogeneity) and alpha = (1+4s)/2 (spatial-regime operator order).
struct FracOrder {
    double s;
    double twoS;
    double alpha;
    SRegime regime;

    explicit FracOrder(double s_) : s(s_), twoS(2.0 * s_), alpha(0.5 * (1.0 + 4.0 * s_)) {
        if (!(s > 0.0) || !(s < 1.0) || !std::isfinite(s))
            throw DomainError("FracOrder: s must lie in (0,1), got " + std::to_string(s_));
        if (s < 0.25)       regime = SRegime::Low;
        else if (s == 0.25) regime = SRegime::Quarter;
        else if (s < 0.75)  regime = SRegime::Mid;
        else if (s == 0.75) regime = SRegime::ThreeQuarter;
        else                regime = SRegime::High;
    }
};

/// A (spatial, velocity) frequency pair (xi, nu).
struct FrequencyPair {
    double xi;
    double nu;
    FrequencyPair(double xi_, double nu_) : xi(xi_), nu(nu_) {
        if (!std::isfinite(xi) || !std::isfinite(nu))
            throw DomainError("FrequencyPair: non-finite frequency");
    }
};

/// A point (t, x, v) in time-phase space; t defaults to 1.
struct PhasePoint {
    double t;
    double x;
    double v;
    PhasePoint(double t_, double x_, double v_) : t(t_), x(x_), v(v_) {}
    PhasePoint(double x_, double v_) : t(1.0), x(x_), v(v_) {}
};

/// Quadrature policy shared by all numeric operations.
struct QuadSpec {
    double absTol = 1e-10;
    double relTol = 1e-9;
    double truncationSafety = 1.0;  // multiplier on the analytic truncation radius
    int    maxPanels = 50000;
    double singularitySplit = 0.25; // half-width delta for integrable singularities

    void validate() const {
        if (!(absTol >= 0.0) || !(relTol >= 0.0) || absTol + relTol <= 0.0)
            throw DomainError("QuadSpec: absTol + relTol must be positive");
        if (!(truncationSafety > 0.0)) throw DomainError("QuadSpec: truncationSafety must be positive");
        if (maxPanels < 8) throw DomainError("QuadSpec: maxPanels must be at least 8");
        if (!(singularitySplit > 0.0)) throw DomainError("QuadSpec: singularitySplit must be positive");
    }
};

enum class Method { Fourier2D, ClosedHalf, SemiIntegral, VRepresentation, XRepresentation, Gaussian };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Fourier2D:       return "Fourier2D";
        case Method::ClosedHalf:      return "ClosedHalf";
        case Method::SemiIntegral:    return "SemiIntegral";
        case Method::VRepresentation: return "VRepresentation";
        case Method::XRepresentation: return "XRepresentation";
        case Method::Gaussian:        return "Gaussian";
    }
    return "?";
}

/// A kernel evaluation together with its accumulated error estimate.
struct KernelValue {
    double value;
    double errorEstimate;
    Method method;
};

} // namespace kinkernel

#endif
