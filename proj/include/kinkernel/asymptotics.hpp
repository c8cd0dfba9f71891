#ifndef KINKERNEL_ASYMPTOTICS_HPP
#define KINKERNEL_ASYMPTOTICS_HPP

#include "kinkernel/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace kinkernel::asymptotics {

/// Ray parameters of the velocity-dominant regime: kappa = lim |x|/|v| in
/// [0,1/2], iota = lim(|v|/2 - |x|) in [-inf, +inf].
struct VelocityRegimeInput {
    double kappa;
    double iota;
    VelocityRegimeInput(double kappa_, double iota_) : kappa(kappa_), iota(iota_) {
        if (!(kappa >= 0.0) || !(kappa <= 0.5))
            throw DomainError("VelocityRegimeInput: kappa must lie in [0, 1/2]");
    }
};

/// Ray parameter of the spatial-dominant regime: kappa = lim |v|/|x| in [0,2).
struct SpatialRegimeInput {
    double kappa;
    explicit SpatialRegimeInput(double kappa_) : kappa(kappa_) {
        if (!(kappa >= 0.0) || !(kappa < 2.0))
            throw DomainError("SpatialRegimeInput: kappa must lie in [0, 2)");
    }
};

enum class QOrder { NoCorrection, Second, Fourth };

/// Order data of the spatial-regime fractional Laplacian (-Delta)^alpha,
/// alpha = (1+4s)/2, with its normalization c_alpha = 2 alpha sin(pi alpha)
/// Gamma(2 alpha)/pi (negative exactly for s in (1/4, 3/4)).
struct FracLaplaceOrder {
    double alpha;
    double cAlpha;
    QOrder qOrder;
    explicit FracLaplaceOrder(double alpha_);
    explicit FracLaplaceOrder(const FracOrder& order) : FracLaplaceOrder(order.alpha) {}
};

enum class Route { PVQuadrature, Hypergeometric, DerivativeSpecial, Auto };

inline const char* route_name(Route r) {
    switch (r) {
        case Route::PVQuadrature: return "PVQuadrature";
        case Route::Hypergeometric: return "Hypergeometric";
        case Route::DerivativeSpecial: return "DerivativeSpecial";
        case Route::Auto: return "Auto";
    }
    return "?";
}

struct AsymptoticConstant {
    double value;
    std::string route;
    double crossRouteResidual; // NaN when only one route was evaluated
};

/// Regularized principal value (-Delta)^alpha u(r): symmetrized integrand
/// with 0/2/4 Taylor corrections, analytic inner piece on (0, delta),
/// analytic polynomial tail and a 1/t-mapped numeric tail for u.
/// `kinks` lists positions where u is not smooth (absolute coordinates).
double frac_pv(const FracLaplaceOrder& ord, const std::function<double(double)>& u, double r,
               const QuadSpec& q, const std::vector<double>& kinks = {});

/// Same operator for alpha in (1,2) through the twice-integrated-by-parts
/// form c_a/((2a)(2a-1)) int [2u''(r)-u''(r+t)-u''(r-t)] t^{1-2a} dt, with
/// the second derivative supplied analytically. This sidesteps the finite
/// difference noise that t^{-1-2a} amplifies in the direct form.
double frac_pv(const FracLaplaceOrder& ord, const std::function<double(double)>& u, double r,
               const QuadSpec& q, const std::vector<double>& kinks,
               const std::function<double(double)>& u2);

/// Velocity-regime constant C_{s,1}(kappa, iota); iota may be +-infinity.
AsymptoticConstant c_s1(const FracOrder& order, const VelocityRegimeInput& inp, const QuadSpec& q);

/// Spatial-regime constant C_{s,3}(kappa) by the selected route.
AsymptoticConstant c_s3(const FracOrder& order, const SpatialRegimeInput& inp, Route route,
                        const QuadSpec& q);

/// The two halves of the harmonic split 4(2s+1)^2 phi_s(2t,1)^2 = f1 + f2.
double split_f1(const FracOrder& order, double t);
double split_f2(const FracOrder& order, double t);
double split_f1_d2(const FracOrder& order, double t);
double split_f2_d2(const FracOrder& order, double t);

/// f1(t) + f2(t) - 4(2s+1)^2 phi_s(2t,1)^2; identically zero.
double split_check(const FracOrder& order, double t);

} // namespace kinkernel::asymptotics

#endif
