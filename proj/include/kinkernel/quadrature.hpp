#ifndef KINKERNEL_QUADRATURE_HPP
#define KINKERNEL_QUADRATURE_HPP

#include "kinkernel/types.hpp"

#include <functional>
#include <vector>

namespace kinkernel::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

/// 15-point Gauss-Kronrod rule on [a,b]; error from the embedded 7-point Gauss rule.
Result gk15(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection over [a,b] with optional interior split points.
/// Stops when sum of panel errors <= max(absTol, relTol*|value|); throws
/// ConvergenceError (carrying the partial value) if maxPanels is exhausted.
Result adaptive(const std::function<double(double)>& f, double a, double b,
                const std::vector<double>& splits, double absTol, double relTol,
                int maxPanels);

inline Result adaptive(const std::function<double(double)>& f, double a, double b,
                       double absTol, double relTol, int maxPanels) {
    return adaptive(f, a, b, {}, absTol, relTol, maxPanels);
}

/// Integrates f over (0, b] with panels geometrically refined toward 0
/// (ratio 1/2), stopping once a panel's contribution falls below stopBelow
/// and the panel edge is below edgeBelow. Each panel is evaluated adaptively.
Result geometric_to_zero(const std::function<double(double)>& f, double b,
                         double stopBelow, double edgeBelow, double absTol,
                         double relTol, int maxPanels);

/// Tanh-sinh (double exponential) panel rule on [a,b]; resolves integrable
/// endpoint singularities without node collisions (near-edge nodes below
/// machine resolution are skipped). Error from successive level differences.
Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double absTol);

/// Upper bound for int_R^inf exp(-c t^p) dt (c>0, p>0, R>0 with c R^p >= 1).
double exp_power_tail_bound(double c, double p, double R);

} // namespace kinkernel::quad

#endif
