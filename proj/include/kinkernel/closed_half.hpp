#ifndef KINKERNEL_CLOSED_HALF_HPP
#define KINKERNEL_CLOSED_HALF_HPP

#include "kinkernel/types.hpp"

namespace kinkernel::closed_half {

/// Arguments of the appendix integral; the kernel substitution is a = 2|x|, b = |v|.
struct AppendixArgs {
    double a;
    double b;
    AppendixArgs(double a_, double b_) : a(a_), b(b_) {
        if (a < 0.0 || b < 0.0) throw DomainError("AppendixArgs: a, b must be nonnegative");
    }
};

/// Exact closed form of k_{1/2}(x,v) = p_{1/2}(1, x+v/2, v), in elementary
/// functions (log, arctan, nested square roots). Positive for all real x, v.
double k_half(double x, double v);

/// Same value through the one-integral (semi-closed) representation:
/// rational term plus a 1-D quadrature over (-1,1).
double k_half_semi(double x, double v, const QuadSpec& q);

/// F_{a,b}(x) = 2((x^2+1)^2 - 4(a+bx)^2) / ((x^2+1)^2 + 4(a+bx)^2)^2.
double F_integrand(const AppendixArgs& args, double x);

/// Closed form of int_{-1}^{1} F_{a,b}; continuous a->0 limit built in.
double F_closed(const AppendixArgs& args);

} // namespace kinkernel::closed_half

#endif
