#ifndef KINKERNEL_SYMBOL_HPP
#define KINKERNEL_SYMBOL_HPP

#include "kinkernel/types.hpp"

#include <tuple>

namespace kinkernel {

/// Raised when a derivative formula is evaluated at one of its genuine
/// singularities (e.g. d2_nu phi at nu = +-xi/2 with 2s < 1).
class SingularityError : public DomainError {
public:
    explicit SingularityError(const std::string& msg) : DomainError(msg) {}
};

/// |y|^p with the y=0 case short-circuited to 0 (p>0); never calls pow on a
/// negative base. Fast paths for the exponents that dominate the hot loops.
double abs_pow(double y, double p);

/// sgn(y)|y|^p, same conventions.
double signed_pow(double y, double p);

/// The Fourier exponent phi_s(xi,nu) = int_0^1 |nu+(u-1/2)xi|^{2s} du.
/// Near xi=0 the closed formula cancels catastrophically; a two-term
/// expansion in xi is used below the branch threshold.
double phi(const FracOrder& order, const FrequencyPair& f);

struct PhiDerivatives {
    double dNu;
    double dNu2;
    double dXi;
};

/// First and second nu-derivatives and the xi-derivative of phi_s.
PhiDerivatives phi_derivatives(const FracOrder& order, const FrequencyPair& f);

/// nu-derivative of order k (1..4); used by the oscillatory tail expansions.
double phi_dnu(const FracOrder& order, double xi, double nu, int k);

/// second xi-derivative of phi.
double phi_dxi2(const FracOrder& order, double xi, double nu);

/// Coefficients of the xi-expansion at (0,1):
/// c2 = [d2_xi phi](0,1) = 2s(2s-1)/12, c4 = [d4_xi phi](0,1) = s(2s-1)(s-1)(2s-3)/20.
std::pair<double, double> phi_taylor_coeffs(const FracOrder& order);

/// j_s(x,v) = (1+|x|^{2+2s}+|v|^{2+2s})(1+(2|x|-|v|)_+)^{2s}.
double envelope_j(const FracOrder& order, double x, double v);

/// Reciprocal of the time-1 comparison function:
/// (1+|x|+|v|)^{2+2s} (1+(2|x|-|v|)_+)^{2s}.
double envelope_thm(const FracOrder& order, double x, double v);

struct ScalingReduction {
    double prefactor; // t^{-(1+1/s)}
    double x1;        // x / t^{1+1/(2s)}
    double v1;        // v / t^{1/(2s)}
};

/// Self-similar reduction to time 1: p_s(t,x,v) = prefactor * p_s(1,x1,v1).
ScalingReduction scaling_reduce(const FracOrder& order, const PhasePoint& p);

/// The all-times comparison function of the corollary bound.
double corollary_envelope(const FracOrder& order, const PhasePoint& p);

} // namespace kinkernel

#endif
