#include "kinkernel/asymptotics.hpp"
#include "kinkernel/fourier_kernel.hpp"
#include "kinkernel/quadrature.hpp"
#include "kinkernel/special.hpp"
#include "kinkernel/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kinkernel::asymptotics {

FracLaplaceOrder::FracLaplaceOrder(double alpha_) : alpha(alpha_) {
    if (!(alpha > 0.0) || !(alpha < 3.0))
        throw DomainError("FracLaplaceOrder: alpha must lie in (0,3)");
    cAlpha = 2.0 * alpha * std::sin(M_PI * alpha) * gamma_fn(2.0 * alpha) / M_PI;
    if (alpha < 1.0)
        qOrder = QOrder::NoCorrection;
    else if (alpha < 2.0)
        qOrder = QOrder::Second;
    else
        qOrder = QOrder::Fourth;
}

namespace {

// central finite differences (kink-aware step choice happens in the caller)
double fd_apply(const std::function<double(double)>& u, double r, double h,
                const double* c, int half, double hpow) {
    double acc = c[half] * u(r);
    for (int j = 1; j <= half; ++j) acc += c[half - j] * (u(r - j * h) + u(r + j * h));
    return acc / hpow;
}

double fd2(const std::function<double(double)>& u, double r, double h) {
    static const double c[3] = {-1.0, 16.0, -30.0}; // /(12 h^2), symmetric
    return fd_apply(u, r, h, c, 2, 12.0 * h * h);
}

double fd4(const std::function<double(double)>& u, double r, double h) {
    static const double c[4] = {-1.0, 12.0, -39.0, 56.0}; // /(6 h^4)
    return fd_apply(u, r, h, c, 3, 6.0 * h * h * h * h);
}

double fd6(const std::function<double(double)>& u, double r, double h) {
    static const double c[4] = {1.0, -6.0, 15.0, -20.0}; // /h^6
    return fd_apply(u, r, h, c, 3, std::pow(h, 6.0));
}

double fd8(const std::function<double(double)>& u, double r, double h) {
    static const double c[5] = {1.0, -8.0, 28.0, -56.0, 70.0}; // /h^8
    return fd_apply(u, r, h, c, 4, std::pow(h, 8.0));
}

} // namespace

double frac_pv(const FracLaplaceOrder& ord, const std::function<double(double)>& u, double r,
               const QuadSpec& q, const std::vector<double>& kinks) {
    q.validate();
    const double alpha = ord.alpha;
    if (std::fabs(alpha - 1.0) < 1e-12 || std::fabs(alpha - 2.0) < 1e-12)
        throw DomainError("frac_pv: integer alpha; use the derivative formulas");

    int m = (ord.qOrder == QOrder::NoCorrection) ? 0 : (ord.qOrder == QOrder::Second ? 1 : 2);

    // distance from r to the nearest kink constrains FD stencils and delta
    double dKink = std::numeric_limits<double>::infinity();
    for (double p : kinks) dKink = std::min(dKink, std::fabs(p - r));

    auto step = [&](double base, int span) {
        double h = base * std::max(1.0, std::fabs(r));
        if (std::isfinite(dKink)) h = std::min(h, dKink / (span + 0.5));
        return std::max(h, 1e-7);
    };

    double c2 = (m >= 1) ? fd2(u, r, step(7e-3, 2)) : 0.0;
    double c4 = (m >= 2) ? fd4(u, r, step(4.5e-2, 3)) : 0.0;

    auto g = [&](double t) {
        return 2.0 * u(r) + c2 * t * t + c4 * t * t * t * t / 12.0 - u(r + t) - u(r - t);
    };

    // inner (0, delta): two Taylor terms of g; delta shrinks until the
    // third-term estimate |t2| delta^2 is inside the tolerance
    double d1, d2v;
    if (m == 0) {
        d1 = fd2(u, r, step(7e-3, 2));
        d2v = fd4(u, r, step(4.5e-2, 3));
    } else if (m == 1) {
        d1 = fd4(u, r, step(4.5e-2, 3));
        d2v = fd6(u, r, step(8e-2, 3));
    } else {
        d1 = fd6(u, r, step(8e-2, 3));
        d2v = fd8(u, r, step(1.1e-1, 4));
    }
    int j1 = m + 1, j2 = m + 2;
    double fact1 = 1.0, fact2 = 1.0;
    for (int i = 2; i <= 2 * j1; ++i) fact1 *= i;
    for (int i = 2; i <= 2 * j2; ++i) fact2 *= i;

    double uScale = 1.0 + std::fabs(u(r));
    double tolInner = std::max(q.absTol * 0.3, 1e-11 * uScale) / std::max(std::fabs(ord.cAlpha), 0.05);

    double delta = std::min(q.singularitySplit, 0.5);
    if (std::isfinite(dKink)) delta = std::min(delta, 0.5 * dKink);
    double deltaLo = std::max(1e-3, std::isfinite(dKink) ? 0.0 : 0.0);
    double t1 = 0.0, t2 = 0.0;
    for (int it = 0; it < 60; ++it) {
        t1 = -2.0 * d1 / fact1 * std::pow(delta, 2.0 * j1 - 2.0 * alpha) / (2.0 * j1 - 2.0 * alpha);
        t2 = -2.0 * d2v / fact2 * std::pow(delta, 2.0 * j2 - 2.0 * alpha) / (2.0 * j2 - 2.0 * alpha);
        if (std::fabs(t2) * delta * delta <= tolInner || delta <= deltaLo * 1.7) break;
        delta *= 0.6;
        if (delta < deltaLo) delta = deltaLo;
    }
    double inner = t1 + t2;

    // numeric middle [delta, T]; the t^{-1-2a} weight amplifies the
    // double-precision noise of g near delta, so the tolerance is floored
    double T = std::max(60.0, 8.0 * (1.0 + std::fabs(r)));
    std::vector<double> splits;
    for (double p : kinks) {
        double off1 = std::fabs(p - r);
        if (off1 > delta && off1 < T) splits.push_back(off1);
    }
    double noiseFloor = 50.0 * 2.2e-16 * uScale * std::pow(delta, -2.0 * alpha) / (2.0 * alpha);
    auto mid = quad::adaptive([&](double t) { return g(t) / std::pow(t, 1.0 + 2.0 * alpha); },
                              delta, T, splits, std::max(q.absTol * 0.2, noiseFloor),
                              q.relTol * 0.1, q.maxPanels);

    // tails: polynomial part analytic, u-part via the 1/t map
    double tailPoly = 2.0 * u(r) * std::pow(T, -2.0 * alpha) / (2.0 * alpha);
    if (m >= 1) tailPoly += c2 * std::pow(T, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
    if (m >= 2) tailPoly += (c4 / 12.0) * std::pow(T, 4.0 - 2.0 * alpha) / (2.0 * alpha - 4.0);
    auto tu = quad::adaptive(
        [&](double y) {
            if (y <= 0.0) return 0.0;
            return (u(r + 1.0 / y) + u(r - 1.0 / y)) * std::pow(y, 2.0 * alpha - 1.0);
        },
        0.0, 1.0 / T, q.absTol * 0.2, q.relTol * 0.1, q.maxPanels);

    return ord.cAlpha * (inner + mid.value + tailPoly - tu.value);
}

double frac_pv(const FracLaplaceOrder& ord, const std::function<double(double)>& u, double r,
               const QuadSpec& q, const std::vector<double>& kinks,
               const std::function<double(double)>& u2) {
    if (ord.qOrder != QOrder::Second) return frac_pv(ord, u, r, q, kinks);
    q.validate();
    const double alpha = ord.alpha;
    const auto& v = u2;

    double dKink = std::numeric_limits<double>::infinity();
    for (double p : kinks) dKink = std::min(dKink, std::fabs(p - r));
    auto step = [&](double base, int span) {
        double h = base * std::max(1.0, std::fabs(r));
        if (std::isfinite(dKink)) h = std::min(h, dKink / (span + 0.5));
        return std::max(h, 1e-7);
    };

    auto h = [&](double t) { return 2.0 * v(r) - v(r + t) - v(r - t); };

    // inner Taylor of h on (0, delta), third term gated
    double v2 = fd2(v, r, step(7e-3, 2));
    double v4 = fd4(v, r, step(4.5e-2, 3));
    double vScale = 1.0 + std::fabs(v(r));
    double tolInner =
        std::max(q.absTol * 0.3, 1e-12 * vScale) / std::max(std::fabs(ord.cAlpha), 0.05);
    double delta = std::min(q.singularitySplit, 0.5);
    if (std::isfinite(dKink)) delta = std::min(delta, 0.5 * dKink);
    double t1 = 0.0, t2 = 0.0;
    for (int it = 0; it < 60; ++it) {
        t1 = -2.0 * v2 / 2.0 * std::pow(delta, 4.0 - 2.0 * alpha) / (4.0 - 2.0 * alpha);
        t2 = -2.0 * v4 / 24.0 * std::pow(delta, 6.0 - 2.0 * alpha) / (6.0 - 2.0 * alpha);
        if (std::fabs(t2) * delta * delta <= tolInner || delta <= 2e-3) break;
        delta *= 0.6;
    }
    double inner = t1 + t2;

    double T = std::max(60.0, 8.0 * (1.0 + std::fabs(r)));
    // v may carry integrable singularities at the kink offsets; put them at
    // segment edges and integrate each segment with the tanh-sinh rule
    std::vector<double> edges{delta};
    for (double p : kinks) {
        double off = std::fabs(p - r);
        if (off > delta && off < T) edges.push_back(off);
    }
    edges.push_back(T);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    quad::Result mid{};
    auto integrand = [&](double t) { return h(t) / std::pow(t, 2.0 * alpha - 1.0); };
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        auto seg = quad::tanh_sinh(integrand, edges[i], edges[i + 1],
                                   q.absTol * 0.2 / (double)(edges.size() - 1));
        mid.value += seg.value;
        mid.error += seg.error;
    }

    double tailPoly = 2.0 * v(r) * std::pow(T, 2.0 - 2.0 * alpha) / (2.0 * alpha - 2.0);
    auto tv = quad::adaptive(
        [&](double y) {
            if (y <= 0.0) return 0.0;
            return (v(r + 1.0 / y) + v(r - 1.0 / y)) * std::pow(y, 2.0 * alpha - 3.0);
        },
        0.0, 1.0 / T, q.absTol * 0.2, q.relTol * 0.1, q.maxPanels);

    return ord.cAlpha * (inner + mid.value + tailPoly - tv.value) /
           ((2.0 * alpha) * (2.0 * alpha - 1.0));
}

// ---------------------------------------------------------------------------
// asymptotic constants
// ---------------------------------------------------------------------------

AsymptoticConstant c_s1(const FracOrder& order, const VelocityRegimeInput& inp,
                        const QuadSpec& q) {
    const double s = order.s, twoS = order.twoS;
    double common = (1.0 + std::pow(inp.kappa, 2.0 + twoS)) * std::pow(2.0, twoS) *
                    std::sin(M_PI * s) * gamma_fn(twoS + 1.0) / M_PI;
    double value;
    if (std::isinf(inp.iota) && inp.iota < 0.0) {
        value = common * gamma_fn(twoS) * std::sin(M_PI * s) / ((twoS + 1.0) * M_PI);
    } else {
        double iotaMinus = std::isinf(inp.iota) ? 0.0 : std::max(-inp.iota, 0.0);
        double cdf;
        if (std::isinf(inp.iota))
            cdf = 1.0;
        else
            cdf = fourier::q_cdf(order, std::pow(1.0 + twoS, 1.0 / twoS) * inp.iota, q);
        value = common * std::pow(0.5 + iotaMinus, twoS) * cdf;
    }
    return {value, "VelocityRegime", std::numeric_limits<double>::quiet_NaN()};
}

namespace {

// C_{1/4,3}(kappa): (1/4pi)(1+k^{5/2}) sqrt(2-k) (16/(3 k^4)) N(k)/sqrt(1-k^2/4),
// N = 1 - k^2/8 - sqrt(1-k^2/4); equal to the derivative assembly
// (1/4pi)(1+k^{5/2})|2-k|^{1/2} (-d^2_k phi^2).
double c_quarter_special(double kappa) {
    double k2 = kappa * kappa;
    double core;
    if (kappa < 1e-2) {
        core = (16.0 / 3.0) * (1.0 / 128.0 + k2 / 1024.0 + 5.0 * k2 * k2 / 32768.0);
        core /= std::sqrt(1.0 - k2 / 4.0);
    } else {
        double w = std::sqrt(1.0 - k2 / 4.0);
        core = (16.0 / (3.0 * k2 * k2)) * (1.0 - k2 / 8.0 - w) / w;
    }
    return (1.0 / (4.0 * M_PI)) * (1.0 + std::pow(kappa, 2.5)) * std::sqrt(2.0 - kappa) * core;
}

// C_{3/4,3}(kappa): (1/4pi)(1+k^{7/2}) 2^{3/2} (3/10) D(k),
// D = (16(4-k^2)(sqrt(4-k^2)-2) + 16k^2 - 3k^4) / (k^6 (1+k/2)^{3/2});
// equal to (1/4pi)(1+k^{7/2})|2-k|^{3/2} d^4_k phi^2.
double c_threequarter_special(double kappa) {
    double k2 = kappa * kappa;
    double num_over_k6;
    if (kappa < 1e-2) {
        num_over_k6 = 1.0 / 8.0 + 3.0 * k2 / 256.0 + 3.0 * k2 * k2 / 2048.0;
    } else {
        double rt = std::sqrt(4.0 - k2);
        num_over_k6 = (16.0 * (4.0 - k2) * (rt - 2.0) + 16.0 * k2 - 3.0 * k2 * k2) /
                      (k2 * k2 * k2);
    }
    double D = num_over_k6 / std::pow(1.0 + kappa / 2.0, 1.5);
    return (1.0 / (4.0 * M_PI)) * (1.0 + std::pow(kappa, 3.5)) * std::pow(2.0, 1.5) * 0.3 * D;
}

constexpr double kHypKappaMax = 1.9;

double c_s3_pv_value(const FracOrder& order, double kappa, const QuadSpec& q) {
    FracLaplaceOrder ord(order);
    auto u = [&order](double t) {
        double p = phi(order, FrequencyPair(t, 1.0));
        return p * p;
    };
    auto u2 = [&order](double t) {
        FrequencyPair f(t, 1.0);
        double p = phi(order, f);
        double p1 = phi_derivatives(order, f).dXi;
        return 2.0 * (p1 * p1 + p * phi_dxi2(order, t, 1.0));
    };
    double pv = frac_pv(ord, u, kappa, q, {-2.0, 2.0}, u2);
    return (1.0 / (4.0 * M_PI)) * (1.0 + std::pow(kappa, 2.0 + order.twoS)) *
           std::pow(2.0 - kappa, order.twoS) * pv;
}

double c_s3_hyp_value(const FracOrder& order, double kappa) {
    const double alpha = order.alpha;
    // (-Delta_kappa)^alpha phi^2 = 2 Gamma(3/2+a)Gamma(1/2+a)(1-sin(pi a)) /
    //   (pi (1+a) (2a+1)^2) * 2F1(1/2+a, 1+a; 2+a; kappa^2/4)
    double pref = 2.0 * gamma_fn(1.5 + alpha) * gamma_fn(0.5 + alpha) *
                  (1.0 - std::sin(M_PI * alpha)) /
                  (M_PI * (1.0 + alpha) * (2.0 * alpha + 1.0) * (2.0 * alpha + 1.0));
    double h = gauss_2f1(0.5 + alpha, 1.0 + alpha, 2.0 + alpha, kappa * kappa / 4.0);
    return (1.0 / (4.0 * M_PI)) * (1.0 + std::pow(kappa, 2.0 + order.twoS)) *
           std::pow(2.0 - kappa, order.twoS) * pref * h;
}

} // namespace

AsymptoticConstant c_s3(const FracOrder& order, const SpatialRegimeInput& inp, Route route,
                        const QuadSpec& q) {
    const double kappa = inp.kappa;
    const bool special = (order.regime == SRegime::Quarter || order.regime == SRegime::ThreeQuarter);
    double nan = std::numeric_limits<double>::quiet_NaN();

    if (route == Route::Auto) {
        if (special) route = Route::DerivativeSpecial;
        else if (kappa <= kHypKappaMax) route = Route::Hypergeometric;
        else route = Route::PVQuadrature;
    }

    switch (route) {
        case Route::DerivativeSpecial: {
            if (order.regime == SRegime::Quarter)
                return {c_quarter_special(kappa), route_name(Route::DerivativeSpecial), nan};
            if (order.regime == SRegime::ThreeQuarter)
                return {c_threequarter_special(kappa), route_name(Route::DerivativeSpecial), nan};
            throw DomainError("c_s3: DerivativeSpecial requires s = 1/4 or s = 3/4");
        }
        case Route::Hypergeometric: {
            if (special) throw DomainError("c_s3: hypergeometric route undefined at s = 1/4, 3/4");
            if (kappa > kHypKappaMax)
                throw DomainError("c_s3: hypergeometric route capped at kappa <= 1.9");
            return {c_s3_hyp_value(order, kappa), route_name(Route::Hypergeometric), nan};
        }
        case Route::PVQuadrature: {
            if (special) throw DomainError("c_s3: PV quadrature degenerate at s = 1/4, 3/4");
            return {c_s3_pv_value(order, kappa, q), route_name(Route::PVQuadrature), nan};
        }
        default: throw DomainError("c_s3: unknown route");
    }
}

// ---------------------------------------------------------------------------
// harmonic split
// ---------------------------------------------------------------------------

double split_f1(const FracOrder& order, double t) {
    const double beta = 2.0 * order.alpha + 1.0; // = 2 + 4s
    if (std::fabs(t) < 0.1) {
        double acc = 0.0, t2 = t * t, pw = 1.0;
        for (int k = 1; k <= 12; ++k) {
            acc += 2.0 * binom_real(beta, 2 * k) * pw;
            pw *= t2;
        }
        return acc;
    }
    return (abs_pow(1.0 + t, beta) + abs_pow(1.0 - t, beta) - 2.0) / (t * t);
}

double split_f2(const FracOrder& order, double t) {
    const double gammaExp = order.alpha + 0.5; // = 1 + 2s
    if (std::fabs(t) < 0.1) {
        double acc = 0.0, t2 = t * t, pw = 1.0;
        double sign = 1.0;
        for (int k = 1; k <= 12; ++k) {
            acc += 2.0 * sign * binom_real(gammaExp, k) * pw;
            pw *= t2;
            sign = -sign;
        }
        return acc;
    }
    double w = 1.0 - t * t;
    return 2.0 * (1.0 - signed_pow(w, gammaExp)) / (t * t);
}

double split_f1_d2(const FracOrder& order, double t) {
    const double beta = 2.0 * order.alpha + 1.0;
    if (std::fabs(t) < 0.25) {
        double acc = 0.0, t2 = t * t, pw = 1.0;
        for (int k = 2; k <= 18; ++k) {
            acc += 2.0 * binom_real(beta, 2 * k) * (2.0 * k - 2.0) * (2.0 * k - 3.0) * pw;
            pw *= t2;
        }
        return acc;
    }
    double P = abs_pow(1.0 + t, beta) + abs_pow(1.0 - t, beta) - 2.0;
    double P1 = beta * (signed_pow(1.0 + t, beta - 1.0) - signed_pow(1.0 - t, beta - 1.0));
    double P2 = beta * (beta - 1.0) * (abs_pow(1.0 + t, beta - 2.0) + abs_pow(1.0 - t, beta - 2.0));
    double t2 = t * t;
    return P2 / t2 - 4.0 * P1 / (t2 * t) + 6.0 * P / (t2 * t2);
}

double split_f2_d2(const FracOrder& order, double t) {
    const double gammaExp = order.alpha + 0.5;
    if (std::fabs(t) < 0.25) {
        double acc = 0.0, t2 = t * t, pw = 1.0;
        double sign = -1.0; // (-1)^{k+1} at k = 2
        for (int k = 2; k <= 18; ++k) {
            acc += 2.0 * sign * binom_real(gammaExp, k) * (2.0 * k - 2.0) * (2.0 * k - 3.0) * pw;
            pw *= t2;
            sign = -sign;
        }
        return acc;
    }
    double w = 1.0 - t * t;
    double Q = 2.0 * (1.0 - signed_pow(w, gammaExp));
    double Q1 = 4.0 * gammaExp * t * abs_pow(w, gammaExp - 1.0);
    double Q2 = 4.0 * gammaExp *
                (abs_pow(w, gammaExp - 1.0) -
                 2.0 * (gammaExp - 1.0) * t * t * signed_pow(w, gammaExp - 2.0));
    double t2 = t * t;
    return Q2 / t2 - 4.0 * Q1 / (t2 * t) + 6.0 * Q / (t2 * t2);
}

double split_check(const FracOrder& order, double t) {
    const double twoS = order.twoS;
    double p = phi(order, FrequencyPair(2.0 * t, 1.0));
    double rhs = 4.0 * (twoS + 1.0) * (twoS + 1.0) * p * p;
    return split_f1(order, t) + split_f2(order, t) - rhs;
}

} // namespace kinkernel::asymptotics
