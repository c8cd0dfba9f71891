#include "kinkernel/path_reps.hpp"
#include "kinkernel/quadrature.hpp"
#include "kinkernel/special.hpp"
#include "kinkernel/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace kinkernel::path_reps {

namespace {

quad::Result osc_block(const std::function<double(double)>& f, double a, double b, double w,
                       double absTol, int maxPanels) {
    std::vector<double> splits;
    if (w > 0.0) {
        double step = M_PI / w;
        long n = (long)std::floor((b - a) / step);
        long cap = std::max(8L, (long)maxPanels - 64);
        if (n > cap) n = cap;
        for (long k = 1; k <= n; ++k) splits.push_back(a + (b - a) * (double)k / (double)(n + 1));
    }
    return quad::adaptive(f, a, b, splits, absTol, 0.0, maxPanels);
}

struct CplxResult {
    std::complex<double> value;
    double error;
};

// int_0^inf e^{(i cos(beta) - sin(beta)) t^{1/(2s)}} e^{-mu t} t^p dt,
// i.e. the gamma_theta ray integral after the substitution r = e^{i pi theta} t
// with beta = pi theta / (2s); requires sin(beta) > 0 (damped), p > -1.
CplxResult ray_integral(double s, double beta, double p, std::complex<double> mu,
                        double rMax, int maxPanels, double absTol) {
    const double invTwoS = 1.0 / (2.0 * s);
    const double sb = std::sin(beta), cb = std::cos(beta);
    if (!(sb > 0.0)) throw DomainError("ray integral: undamped angle");

    // natural magnitude of the integral; requesting absolute accuracy far
    // below it just makes the panels chase their own roundoff
    double capMu = (mu.real() > 0.0) ? gamma_fn(p + 1.0) / std::pow(mu.real(), p + 1.0)
                                     : std::numeric_limits<double>::infinity();
    double capOsc = 2.0 * s * gamma_fn(2.0 * s * (p + 1.0)) / std::pow(sb, 2.0 * s * (p + 1.0));
    double scale = std::min(capMu, capOsc);
    absTol = std::max(absTol, scale * 1e-10);

    double T = std::pow((60.0 + std::max(p, 0.0) * 8.0) / sb, 2.0 * s);
    for (int i = 0; i < 80; ++i) {
        double expo = sb * std::pow(T, invTwoS) + mu.real() * T - std::max(p, 0.0) * std::log(T);
        if (expo > 50.0) break;
        T *= 1.5;
    }
    if (rMax > 0.0) {
        double expo = sb * std::pow(rMax, invTwoS) + mu.real() * rMax;
        if (expo < 30.0)
            throw ConvergenceError("ray integral: rMax too small for the damping", 0.0, 1.0);
        T = std::min(T, rMax);
    }

    // phase is monotone; pre-split at its half-periods
    auto phase = [&](double t) {
        return std::fabs(cb) * std::pow(t, invTwoS) + std::fabs(mu.imag()) * t;
    };
    std::vector<double> splits;
    double totPhase = phase(T);
    long n = (long)std::min<double>(std::floor(totPhase / M_PI), std::max(16, maxPanels - 64));
    for (long k = 1; k <= n; ++k) {
        double target = M_PI * (double)k;
        double lo = 0.0, hi = T;
        for (int it = 0; it < 48; ++it) {
            double mid = 0.5 * (lo + hi);
            (phase(mid) < target ? lo : hi) = mid;
        }
        splits.push_back(0.5 * (lo + hi));
    }

    auto make = [&](bool re) {
        return [&, re](double t) {
            double y = std::pow(t, invTwoS);
            double damp = std::exp(-sb * y - mu.real() * t + p * std::log(t));
            double arg = cb * y - mu.imag() * t;
            return damp * (re ? std::cos(arg) : std::sin(arg));
        };
    };
    auto fre = make(true);
    auto fim = make(false);

    CplxResult out;
    double err = 0.0;
    double t0 = std::min(1.0, T);
    auto gre = quad::geometric_to_zero(fre, t0, absTol * 1e-2, 1e-6, absTol * 0.25, 0.0, maxPanels);
    auto gim = quad::geometric_to_zero(fim, t0, absTol * 1e-2, 1e-6, absTol * 0.25, 0.0, maxPanels);
    out.value = {gre.value, gim.value};
    err += gre.error + gim.error;
    if (T > t0) {
        std::vector<double> sp;
        for (double x : splits)
            if (x > t0 && x < T) sp.push_back(x);
        auto rre = quad::adaptive(fre, t0, T, sp, absTol * 0.25, 0.0, maxPanels);
        auto rim = quad::adaptive(fim, t0, T, sp, absTol * 0.25, 0.0, maxPanels);
        out.value += std::complex<double>(rre.value, rim.value);
        err += rre.error + rim.error;
    }
    out.error = err + std::exp(-50.0);
    return out;
}

// Im int_{gamma_theta} e^{i r^{1/2s}} r^{1/2s + alpha} dr
double im_ray_power(const FracOrder& order, double alphaExp, double theta, double rMax,
                    int maxPanels, double absTol) {
    const double s = order.s;
    const double beta = M_PI * theta / (2.0 * s);
    const double p = 1.0 / (2.0 * s) + alphaExp;
    auto r = ray_integral(s, beta, p, {0.0, 0.0}, rMax, maxPanels, absTol);
    std::complex<double> phase = std::polar(1.0, M_PI * theta * (1.0 + p));
    return (phase * r.value).imag();
}

} // namespace

std::pair<double, double> ray_gamma_identity(const FracOrder& order, double alphaExp,
                                             const RayPath& path) {
    const double s = order.s;
    if (!(path.theta > 0.0) || !(path.theta < 2.0 * s))
        throw DomainError("ray_gamma_identity: theta must lie in (0, 2s)");
    if (!(alphaExp > -1.0 - 1.0 / (2.0 * s)))
        throw DomainError("ray_gamma_identity: alpha below the integrability threshold");
    double numeric =
        im_ray_power(order, alphaExp, path.theta, path.rMax, path.points, 1e-11) / (2.0 * s);
    double closed =
        std::cos(M_PI * s * (1.0 + alphaExp)) * gamma_fn(2.0 * s * (1.0 + alphaExp) + 1.0);
    return {numeric, closed};
}

double cancellation_identity(const FracOrder& order, double k, double c, const RayPath& path) {
    const double s = order.s;
    const double twoS = order.twoS;
    if (!(c > 0.0)) throw DomainError("cancellation_identity: c must be positive");
    if (k < 1.0 / twoS - 1e-12) throw DomainError("cancellation_identity: k must be >= 1/(2s)");
    const double theta = path.theta;
    if (!(theta > 0.0) || !(theta < std::min(0.5, twoS)))
        throw DomainError("cancellation_identity: theta must lie in (0, min(1/2, 2s))");

    const double beta = M_PI * theta / twoS;
    const double p = 1.0 / twoS + k - 1.0;
    const std::complex<double> eTheta = std::polar(1.0, M_PI * theta);
    const std::complex<double> phase = std::polar(1.0, M_PI * theta * (1.0 + p));
    const double absTol = 1e-9;

    auto inner_im = [&](double t) {
        std::complex<double> mu = c * eTheta / std::pow(t, twoS);
        auto r = ray_integral(s, beta, p, mu, 0.0, path.points, absTol * 1e-2);
        return (phase * r.value).imag();
    };

    // T makes the exponential series of e^{-cr/t^{2s}} geometric beyond it
    double rhoBar = std::pow((60.0 + 8.0 * p) / std::sin(beta), twoS);
    double T = std::max(std::pow(2.0 * c * rhoBar * std::cos(M_PI * theta) + 1.0, 1.0 / twoS), 4.0);

    // the outer integrand is bounded by K t; skip the region contributing
    // less than 5% of the tolerance
    double K = gamma_fn(p + 1.0) * std::pow(c * std::cos(M_PI * theta), -(p + 1.0));
    double tLo = std::sqrt(0.1 * absTol / K);
    auto outer = quad::adaptive(
        [&](double t) {
            if (t < tLo) return 0.0;
            return std::pow(t, -twoS * k) * inner_im(t);
        },
        0.0, T, {T / 16.0, T / 4.0}, absTol, 1e-8, 6000);

    double tail = 0.0;
    double cj = 1.0; // (-c)^j / j!
    for (int j = 0; j <= 16; ++j) {
        if (j > 0) cj *= -c / (double)j;
        double Aj = im_ray_power(order, k - 1.0 + (double)j, theta, 0.0, path.points, 1e-12);
        double expnt = twoS * (k + (double)j) - 1.0;
        if (expnt <= 1e-10) continue; // coefficient vanishes analytically at k = 1/(2s)
        double term = cj * Aj * std::pow(T, -expnt) / expnt;
        tail += term;
        if (std::fabs(term) < 1e-13 && j > 2) break;
    }
    return outer.value + tail;
}

// ---------------------------------------------------------------------------
// kernel representations at theta = 0
// ---------------------------------------------------------------------------

namespace {

struct RepSpec {
    double a;                          // argument center
    double c1;                         // argument slope in t
    double B;                          // |v|^{2s} resp. |x|^{2s}
    double oscW;                       // 1 (v-rep) or 2 (x-rep)
    std::function<double(double)> D;   // derivative factor of the integrand
    std::function<double(double)> Phi; // exponent
    std::vector<double> kinks;         // t > 0 kink locations
    double phiFloor;                   // inf Phi along the path
};

struct WEval {
    double value;
    double error;
};

WEval eval_W(const FracOrder& order, const RepSpec& sp, double r, double absTol, int maxPanels) {
    const double twoS = order.twoS;
    auto f = [&](double t) {
        double wp = sp.a + sp.c1 * t;
        double wm = sp.a - sp.c1 * t;
        double damp = r / (sp.B * std::pow(t, twoS));
        return std::pow(t, -1.0 - twoS) *
               (sp.D(wp) * std::exp(-damp * sp.Phi(wp)) - sp.D(wm) * std::exp(-damp * sp.Phi(wm)));
    };
    WEval out{0.0, 0.0};
    absTol = std::max(absTol, 5e-14); // double-precision noise floor of the integrand
    double T = std::max(4.0, 2.0 * (1.0 + std::fabs(sp.a) / std::max(sp.c1, 1e-12)));
    double t0 = std::min(1.0, T / 4.0);
    double edge = std::pow(std::max(r, 1e-280) * sp.phiFloor / (40.0 * sp.B), 1.0 / twoS);
    auto g0 = quad::geometric_to_zero(f, t0, absTol * 1e-2, std::min(edge, 0.5 * t0),
                                      absTol * 0.2, 1e-11, maxPanels);
    out.value += g0.value;
    out.error += g0.error;
    std::vector<double> sps;
    for (double kk : sp.kinks)
        if (kk > t0 && kk < T) sps.push_back(kk);
    auto rmid = quad::adaptive(f, t0, T, sps, absTol * 0.2, 1e-11, maxPanels);
    out.value += rmid.value;
    out.error += rmid.error;
    auto ftail = [&](double u) { return u > 0.0 ? f(1.0 / u) / (u * u) : 0.0; };
    auto rt = quad::adaptive(ftail, 0.0, 1.0 / T, absTol * 0.2, 1e-11, maxPanels);
    out.value += rt.value;
    out.error += rt.error;
    return out;
}

KernelValue rep_eval(const FracOrder& order, const RepSpec& sp, double scalePow, double absTol,
                     int maxPanels, Method method) {
    const double twoS = order.twoS;
    double werrMax = 0.0;
    auto wTol = [&](double y) { return absTol * 0.02 / (1.0 + std::pow(y, twoS)); };
    auto f = [&](double y) {
        if (y <= 0.0) return 0.0;
        double r = std::pow(y, twoS);
        WEval w = eval_W(order, sp, r, wTol(y), maxPanels);
        werrMax = std::max(werrMax, w.error * std::pow(y, twoS));
        return std::sin(sp.oscW * y) * std::pow(y, twoS) * w.value;
    };
    double value = 0.0, err = 0.0;
    double blk = std::max(8.0 * M_PI / sp.oscW, 4.0);
    double a = 0.0;
    int quiet = 0;
    for (int i = 0; i < 400; ++i) {
        double b = a + blk;
        auto rr = osc_block(f, a, b, sp.oscW, absTol * 0.2, maxPanels);
        value += rr.value;
        err += rr.error;
        a = b;
        WEval w = eval_W(order, sp, std::pow(a, twoS), wTol(a), maxPanels);
        if (std::fabs(w.value) * std::pow(a, twoS) < absTol * 0.05) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
        blk *= 1.25;
    }
    err += werrMax * a;
    double scale = 1.0 / (M_PI * M_PI * scalePow);
    return {value * scale, err * scale, method};
}

} // namespace

KernelValue k_via_v_rep(const FracOrder& order, double x, double v, const QuadSpec& q) {
    q.validate();
    if (v == 0.0) throw DomainError("k_via_v_rep: v must be nonzero");
    const double X = std::fabs(x), V = std::fabs(v);
    const double a = 2.0 * X / V;
    RepSpec sp;
    sp.a = a;
    sp.c1 = 1.0;
    sp.B = abs_pow(V, order.twoS);
    sp.oscW = 1.0;
    sp.D = [&order](double w) { return phi_dnu(order, 2.0, w, 1); };
    sp.Phi = [&order](double w) { return phi(order, FrequencyPair(2.0, w)); };
    sp.kinks = {std::fabs(1.0 - a), 1.0 + a, std::max(a, 1e-12)};
    sp.phiFloor = 1.0 / (order.twoS + 1.0); // phi(2, .) is minimized at 0
    KernelValue out = rep_eval(order, sp, abs_pow(V, 2.0 + order.twoS), q.absTol, q.maxPanels,
                               Method::VRepresentation);
    return out;
}

KernelValue k_via_x_rep(const FracOrder& order, double x, double v, const QuadSpec& q) {
    q.validate();
    if (x == 0.0) throw DomainError("k_via_x_rep: x must be nonzero");
    const double X = std::fabs(x), V = std::fabs(v);
    const double a = V / X;
    RepSpec sp;
    sp.a = a;
    sp.c1 = 2.0;
    sp.B = abs_pow(X, order.twoS);
    sp.oscW = 2.0;
    sp.D = [&order](double w) { return phi_derivatives(order, FrequencyPair(w, 1.0)).dXi; };
    sp.Phi = [&order](double w) { return phi(order, FrequencyPair(w, 1.0)); };
    sp.kinks = {std::fabs(2.0 - a) / 2.0, (2.0 + a) / 2.0, std::max(a / 2.0, 1e-12)};
    sp.phiFloor = 1.0; // phi(., 1) is minimized at 0 with value 1
    KernelValue out = rep_eval(order, sp, abs_pow(X, 2.0 + order.twoS), q.absTol, q.maxPanels,
                               Method::XRepresentation);
    return out;
}

} // namespace kinkernel::path_reps
