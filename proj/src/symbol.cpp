#include "kinkernel/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace kinkernel {

double abs_pow(double y, double p) {
    double a = std::fabs(y);
    if (a == 0.0) return 0.0;
    if (p == 1.0) return a;
    if (p == 0.5) return std::sqrt(a);
    if (p == 1.5) return a * std::sqrt(a);
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

double signed_pow(double y, double p) {
    double m = abs_pow(y, p);
    return y < 0.0 ? -m : m;
}

namespace {

// For |xi| <= |nu|/2 everything is evaluated through the binomial series
// phi(xi,nu) = sum_m C(2s,2m)/((2m+1) 4^m) |nu|^{2s-2m} xi^{2m},
// which converges with ratio (xi/(2nu))^2 <= 1/16 and has no cancellation;
// the closed formulas lose digits like (nu/xi)^2 there.
inline bool use_series(double xi, double nu) { return std::fabs(xi) <= 0.5 * std::fabs(nu); }

constexpr int kSeriesTerms = 24;

// sum_m a_m * (2s-2m)(2s-2m-1)...(2s-2m-k+1) sgn(nu)^k |nu|^{2s-2m-k} xi^{2m}
// = d^k/dnu^k phi for k = 0..4 via the series
double phi_series_dnu(double twoS, double xi, double nu, int k) {
    const double q = xi / nu;
    const double q2 = 0.25 * q * q;
    double binom = 1.0;        // C(2s, 2m)
    double q2m = 1.0;          // (xi/(2 nu))^{2m} scaled below
    double acc = 0.0;
    for (int m = 0; m < kSeriesTerms; ++m) {
        double am = binom / (2.0 * m + 1.0);
        double fall = 1.0;
        for (int j = 0; j < k; ++j) fall *= (twoS - 2.0 * m - j);
        double term = am * fall * q2m;
        acc += term;
        if (m > 0 && std::fabs(term) < 1e-18 * std::fabs(acc) + 1e-300) break;
        binom *= (twoS - 2.0 * m) * (twoS - 2.0 * m - 1.0) / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
        q2m *= q2;
    }
    double v = acc * abs_pow(nu, twoS - k);
    if (k % 2 == 1 && nu < 0.0) v = -v;
    return v;
}

// d_xi phi via the series: sum_{m>=1} a_m 2m |nu|^{2s-2m} xi^{2m-1}
double phi_series_dxi(double twoS, double xi, double nu) {
    const double q = xi / nu;
    const double q2 = 0.25 * q * q;
    double binom = twoS * (twoS - 1.0) / 2.0; // C(2s, 2)
    double qpow = 1.0;
    double acc = 0.0;
    for (int m = 1; m < kSeriesTerms; ++m) {
        double am = binom / (2.0 * m + 1.0);
        double term = am * (2.0 * m) * qpow;
        acc += term;
        if (m > 1 && std::fabs(term) < 1e-18 * std::fabs(acc) + 1e-300) break;
        binom *= (twoS - 2.0 * m) * (twoS - 2.0 * m - 1.0) / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
        qpow *= q2;
    }
    // one factor of xi and the 4^{-m} scaling folded into qpow/q
    return acc * abs_pow(nu, twoS - 2.0) * xi * 0.25;
}

} // namespace

double phi(const FracOrder& order, const FrequencyPair& f) {
    const double twoS = order.twoS;
    const double xi = f.xi, nu = f.nu;
    if (xi == 0.0) return abs_pow(nu, twoS);
    if (use_series(xi, nu)) return phi_series_dnu(twoS, xi, nu, 0);
    double a = nu + 0.5 * xi;
    double b = nu - 0.5 * xi;
    double val = (signed_pow(a, 1.0 + twoS) - signed_pow(b, 1.0 + twoS)) / ((twoS + 1.0) * xi);
    return val < 0.0 ? 0.0 : val; // nonnegative by definition; clamp roundoff
}

PhiDerivatives phi_derivatives(const FracOrder& order, const FrequencyPair& f) {
    const double twoS = order.twoS;
    const double xi = f.xi, nu = f.nu;
    PhiDerivatives d{};

    const double a = nu + 0.5 * xi;
    const double b = nu - 0.5 * xi;
    if ((a == 0.0 || b == 0.0) && twoS < 1.0)
        throw SingularityError("phi_derivatives: d2_nu phi singular at nu = +-xi/2 for 2s < 1");

    if (xi != 0.0 && use_series(xi, nu)) {
        d.dNu = phi_series_dnu(twoS, xi, nu, 1);
        d.dNu2 = phi_series_dnu(twoS, xi, nu, 2);
        d.dXi = phi_series_dxi(twoS, xi, nu);
        return d;
    }
    if (xi == 0.0) {
        d.dNu = twoS * signed_pow(nu, twoS - 1.0);
        d.dNu2 = twoS * (twoS - 1.0) * abs_pow(nu, twoS - 2.0);
        d.dXi = 0.0;
        return d;
    }
    d.dNu = (abs_pow(a, twoS) - abs_pow(b, twoS)) / xi;
    d.dNu2 = twoS * (signed_pow(a, twoS - 1.0) - signed_pow(b, twoS - 1.0)) / xi;
    double num = signed_pow(a, 1.0 + twoS) - signed_pow(b, 1.0 + twoS);
    d.dXi = -num / ((twoS + 1.0) * xi * xi) + (abs_pow(a, twoS) + abs_pow(b, twoS)) / (2.0 * xi);
    return d;
}

double phi_dnu(const FracOrder& order, double xi, double nu, int k) {
    if (k < 1 || k > 4) throw DomainError("phi_dnu: derivative order must be 1..4");
    const double twoS = order.twoS;
    if (xi == 0.0 || use_series(xi, nu)) {
        if (nu == 0.0 && xi == 0.0) return 0.0;
        return phi_series_dnu(twoS, xi, nu, k);
    }
    const double a = nu + 0.5 * xi;
    const double b = nu - 0.5 * xi;
    switch (k) {
        case 1: return (abs_pow(a, twoS) - abs_pow(b, twoS)) / xi;
        case 2: return twoS * (signed_pow(a, twoS - 1.0) - signed_pow(b, twoS - 1.0)) / xi;
        case 3: return twoS * (twoS - 1.0) * (abs_pow(a, twoS - 2.0) - abs_pow(b, twoS - 2.0)) / xi;
        default:
            return twoS * (twoS - 1.0) * (twoS - 2.0) *
                   (signed_pow(a, twoS - 3.0) - signed_pow(b, twoS - 3.0)) / xi;
    }
}

double phi_dxi2(const FracOrder& order, double xi, double nu) {
    const double twoS = order.twoS;
    if (xi != 0.0 && !use_series(xi, nu)) {
        const double a = nu + 0.5 * xi;
        const double b = nu - 0.5 * xi;
        double A = abs_pow(a, twoS), B = abs_pow(b, twoS);
        double f = (signed_pow(a, 1.0 + twoS) - signed_pow(b, 1.0 + twoS)) / ((twoS + 1.0) * xi);
        return 2.0 * f / (xi * xi) - (A + B) / (xi * xi) +
               order.s * (signed_pow(a, twoS - 1.0) - signed_pow(b, twoS - 1.0)) / (2.0 * xi);
    }
    if (nu == 0.0) return 0.0;
    // series: |nu|^{2s-2} sum_{m>=1} C(2s,2m)/((2m+1) 4^m) 2m(2m-1) w^{m-1},
    // w = (xi/nu)^2
    const double w = (xi / nu) * (xi / nu);
    double binom = twoS * (twoS - 1.0) / 2.0; // C(2s, 2m) at m=1
    double pow4 = 4.0;                        // 4^m
    double wpow = 1.0;                        // w^{m-1}
    double acc = 0.0;
    for (int m = 1; m < kSeriesTerms; ++m) {
        double term = binom / ((2.0 * m + 1.0) * pow4) * (2.0 * m) * (2.0 * m - 1.0) * wpow;
        acc += term;
        if (m > 1 && std::fabs(term) < 1e-18 * std::fabs(acc) + 1e-300) break;
        binom *= (twoS - 2.0 * m) * (twoS - 2.0 * m - 1.0) / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
        pow4 *= 4.0;
        wpow *= w;
    }
    return acc * abs_pow(nu, twoS - 2.0);
}

std::pair<double, double> phi_taylor_coeffs(const FracOrder& order) {
    const double s = order.s, twoS = order.twoS;
    double c2 = twoS * (twoS - 1.0) / 12.0;
    double c4 = s * (twoS - 1.0) * (s - 1.0) * (twoS - 3.0) / 20.0;
    return {c2, c4};
}

double envelope_j(const FracOrder& order, double x, double v) {
    const double twoS = order.twoS;
    double X = std::fabs(x), V = std::fabs(v);
    double pos = std::max(2.0 * X - V, 0.0);
    return (1.0 + abs_pow(X, 2.0 + twoS) + abs_pow(V, 2.0 + twoS)) * abs_pow(1.0 + pos, twoS);
}

double envelope_thm(const FracOrder& order, double x, double v) {
    const double twoS = order.twoS;
    double X = std::fabs(x), V = std::fabs(v);
    double pos = std::max(2.0 * X - V, 0.0);
    return abs_pow(1.0 + X + V, 2.0 + twoS) * abs_pow(1.0 + pos, twoS);
}

ScalingReduction scaling_reduce(const FracOrder& order, const PhasePoint& p) {
    if (!(p.t > 0.0)) throw DomainError("scaling_reduce: t must be positive");
    const double s = order.s;
    ScalingReduction r{};
    r.prefactor = std::pow(p.t, -(1.0 + 1.0 / s));
    r.x1 = p.x * std::pow(p.t, -(1.0 + 1.0 / (2.0 * s)));
    r.v1 = p.v * std::pow(p.t, -1.0 / (2.0 * s));
    return r;
}

double corollary_envelope(const FracOrder& order, const PhasePoint& p) {
    if (!(p.t > 0.0)) throw DomainError("corollary_envelope: t must be positive");
    const double s = order.s, twoS = order.twoS;
    const double t = p.t;
    double y = p.x - t * p.v / 2.0;
    double w = t * p.v;
    double norm = std::hypot(y, w);

    double first = std::pow(t, -(1.0 + 1.0 / s));
    if (norm > 0.0) first = std::min(first, std::pow(t, 2.0 + twoS) / abs_pow(norm, 2.0 + twoS));

    double pos = std::max(std::fabs(y) - std::fabs(w) / 2.0, 0.0);
    double second = 1.0;
    if (pos > 0.0) second = std::min(1.0, std::pow(t, 1.0 + twoS) / abs_pow(pos, twoS));
    return first * second;
}

} // namespace kinkernel
