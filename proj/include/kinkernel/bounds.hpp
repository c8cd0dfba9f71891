#ifndef KINKERNEL_BOUNDS_HPP
#define KINKERNEL_BOUNDS_HPP

#include "kinkernel/types.hpp"

#include <vector>

namespace kinkernel::bounds {

struct GridRect {
    double xlo, xhi, vlo, vhi;
};

/// Extrema of g_s = k_s * envelope_thm over a grid; minRatio > 0 certifies
/// the lower bound empirically, empiricalC = max(maxRatio, 1/minRatio).
struct RatioReport {
    double s;
    GridRect rect;
    double step;
    double minRatio;
    double maxRatio;
    double argminX, argminV;
    double argmaxX, argmaxV;
    double empiricalC;
};

RatioReport ratio_grid(const FracOrder& order, const GridRect& rect, double step,
                       const QuadSpec& q);

enum class RayKind { VelocityRay, SpatialRay, DiagonalOffset };

/// A path to infinity with prescribed limiting ratio/offset, sampled at the
/// given Euclidean radii.
struct RaySpec {
    RayKind kind;
    double kappa = 0.0; // VelocityRay: |x|/|v| <= 1/2; SpatialRay: |v|/|x| < 2
    double iota = 0.0;  // DiagonalOffset: |v|/2 - |x|
    std::vector<double> radii = {25.0, 50.0, 100.0, 200.0};
};

struct RayLimitResult {
    std::vector<std::pair<double, double>> values; // (radius, j_s * k_s)
    double predicted;    // constant from the asymptotics module
    double extrapolated; // Aitken extrapolation of the last three values
};

RayLimitResult ray_limit(const FracOrder& order, const RaySpec& ray, const QuadSpec& q);

} // namespace kinkernel::bounds

#endif
