#ifndef KINKERNEL_FOURIER_KERNEL_HPP
#define KINKERNEL_FOURIER_KERNEL_HPP

#include "kinkernel/symbol.hpp"
#include "kinkernel/types.hpp"

#include <memory>

namespace kinkernel::fourier {

/// Caches the velocity-side inner integral J(xi; v) = int_0^inf cos(v nu)
/// e^{-phi(xi,nu)} dnu as a piecewise-Chebyshev surrogate. Reusing one cache
/// across evaluations that share (order, v) makes grid sweeps and the mass
/// integral affordable; a fresh cache is built transparently otherwise.
class InnerCache;

struct KernelContext {
    std::shared_ptr<InnerCache> cache;
};

/// k_s(x,v) by 2-D cosine Fourier inversion:
/// (1/pi^2) int_0^inf int_0^inf cos(x xi) cos(v nu) e^{-phi_s(xi,nu)} dxi dnu.
KernelValue k_eval(const FracOrder& order, double x, double v, const QuadSpec& q);
KernelValue k_eval(const FracOrder& order, double x, double v, const QuadSpec& q,
                   KernelContext& ctx);

/// p_s(t,x,v) through the scaling reduction and k_eval.
KernelValue p_eval(const FracOrder& order, const PhasePoint& p, const QuadSpec& q);

/// Fractional heat kernel q_s(1,x) = (1/pi) int_0^inf cos(x xi) e^{-xi^{2s}} dxi.
KernelValue q_eval(const FracOrder& order, double x, const QuadSpec& q);

/// CDF of q_s; deep tails switch to the stable-law asymptote
/// C_q |x|^{-2s}/(2s), C_q = sin(pi s) Gamma(2s+1)/pi.
double q_cdf(const FracOrder& order, double x, const QuadSpec& q);

/// Tail coefficient C_q above.
double q_tail_coefficient(const FracOrder& order);

/// Total mass int int k_s dx dv: nested quadrature over [-X,X]x[-V,V],
/// envelope-anchored x-tail, exact fractional-heat marginal for the v-tail.
double mass(const FracOrder& order, const QuadSpec& q);

/// Classical s=1 Kolmogorov kernel (normalized to unit mass):
/// (sqrt(3)/(2 pi t^2)) exp(-v^2/(4t) - 3(x - tv/2)^2/t^3).
KernelValue kolmogorov_gaussian(const PhasePoint& p);

namespace detail {
/// test/debug hook: the inner integral J(xi; v) and its error estimate
std::pair<double, double> inner_j_probe(const FracOrder& order, double xi, double v,
                                        double absTol, int maxPanels);
/// test/debug hook: global count of integrand evaluations in inner_j
long inner_eval_count();
} // namespace detail

} // namespace kinkernel::fourier

#endif
