#ifndef KINKERNEL_PATH_REPS_HPP
#define KINKERNEL_PATH_REPS_HPP

#include "kinkernel/types.hpp"

#include <utility>

namespace kinkernel::path_reps {

/// Half-line gamma_theta(t) = e^{i pi theta} t in the upper complex plane.
struct RayPath {
    double theta = 0.1; // angle fraction; admissible range depends on s
    double rMax = 0.0;  // truncation radius; 0 = choose from the damping rate
    int points = 40000; // panel budget

    RayPath() = default;
    RayPath(double theta_, double rMax_ = 0.0, int points_ = 40000)
        : theta(theta_), rMax(rMax_), points(points_) {
        if (points <= 0) throw DomainError("RayPath: points must be positive");
        if (theta < 0.0 || theta >= 0.5 + 1e-15) {
            // theta in [0, min(1/2, 2s)) for the kernel representations;
            // the gamma identity additionally allows theta up to 2s.
        }
    }
};

/// Ray-integral Gamma identity check: returns (numeric, closed) where
/// numeric = Im (1/2s) int_{gamma_theta} e^{i r^{1/2s}} r^{1/2s+alpha} dr and
/// closed  = cos(pi s (1+alpha)) Gamma(2s(1+alpha)+1).
std::pair<double, double> ray_gamma_identity(const FracOrder& order, double alphaExp,
                                             const RayPath& path);

/// Double-integral cancellation identity: numeric value of
/// Im int_0^inf t^{-2sk} int_{gamma_theta} e^{i r^{1/2s}} r^{1/2s+k-1}
/// e^{-c r / t^{2s}} dr dt  (= 0 for k > 1/2s, pi s/2 at k = 1/2s).
double cancellation_identity(const FracOrder& order, double k, double c, const RayPath& path);

/// k_s recovered from the velocity-side representation (theta = 0), v != 0.
KernelValue k_via_v_rep(const FracOrder& order, double x, double v, const QuadSpec& q);

/// k_s recovered from the spatial-side representation (theta = 0), x != 0.
KernelValue k_via_x_rep(const FracOrder& order, double x, double v, const QuadSpec& q);

} // namespace kinkernel::path_reps

#endif
