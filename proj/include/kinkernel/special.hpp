#ifndef KINKERNEL_SPECIAL_HPP
#define KINKERNEL_SPECIAL_HPP

#include "kinkernel/types.hpp"

namespace kinkernel {

/// Gamma(z) via the Lanczos approximation (g = 607/128, 15 terms),
/// reflection formula for z < 1/2. Accuracy ~1e-14 relative on the real line.
double gamma_fn(double z);

/// Gauss hypergeometric 2F1(a,b;c;z) for 0 <= z < 1, c not a nonpositive
/// integer. Direct series for z <= 1/2; Euler transformation
/// (1-z)^{c-a-b} 2F1(c-a, c-b; c; z) for 1/2 < z < 1.
double gauss_2f1(double a, double b, double c, double z);

/// Generalized binomial coefficient C(beta, k) for real beta, integer k >= 0.
double binom_real(double beta, int k);

} // namespace kinkernel

#endif
