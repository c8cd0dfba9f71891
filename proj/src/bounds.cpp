#include "kinkernel/bounds.hpp"
#include "kinkernel/asymptotics.hpp"
#include "kinkernel/closed_half.hpp"
#include "kinkernel/fourier_kernel.hpp"
#include "kinkernel/parallel.hpp"
#include "kinkernel/symbol.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace kinkernel {

int thread_count() {
    if (const char* env = std::getenv("KINKERNEL_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (int)hc : 2;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int nw = std::min<std::size_t>(thread_count(), n ? n : 1);
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr eptr;
    std::mutex emu;
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(emu);
                    if (!eptr) eptr = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (eptr) std::rethrow_exception(eptr);
}

} // namespace kinkernel

namespace kinkernel::bounds {

namespace {

double kernel_at(const FracOrder& order, double x, double v, const QuadSpec& q,
                 fourier::KernelContext* ctx) {
    if (order.s == 0.5) return closed_half::k_half(x, v);
    if (ctx) return fourier::k_eval(order, x, v, q, *ctx).value;
    return fourier::k_eval(order, x, v, q).value;
}

} // namespace

RatioReport ratio_grid(const FracOrder& order, const GridRect& rect, double step,
                       const QuadSpec& q) {
    if (!(step > 0.0)) throw DomainError("ratio_grid: step must be positive");
    if (!(rect.xhi > rect.xlo) || !(rect.vhi > rect.vlo))
        throw DomainError("ratio_grid: degenerate rectangle");
    q.validate();

    const long nx = (long)std::floor((rect.xhi - rect.xlo) / step + 0.5) + 1;
    const long nv = (long)std::floor((rect.vhi - rect.vlo) / step + 0.5) + 1;

    struct RowExtreme {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -std::numeric_limits<double>::infinity();
        double mnX = 0, mnV = 0, mxX = 0, mxV = 0;
    };
    std::vector<RowExtreme> rows((size_t)nv);

    parallel_for((size_t)nv, [&](size_t iv) {
        double v = rect.vlo + (double)iv * step;
        fourier::KernelContext ctx; // shared across the row (same v)
        RowExtreme& re = rows[iv];
        for (long ix = 0; ix < nx; ++ix) {
            double x = rect.xlo + (double)ix * step;
            double g = kernel_at(order, x, v, q, &ctx) * envelope_thm(order, x, v);
            if (g < re.mn) {
                re.mn = g;
                re.mnX = x;
                re.mnV = v;
            }
            if (g > re.mx) {
                re.mx = g;
                re.mxX = x;
                re.mxV = v;
            }
        }
    });

    RatioReport rep{};
    rep.s = order.s;
    rep.rect = rect;
    rep.step = step;
    rep.minRatio = std::numeric_limits<double>::infinity();
    rep.maxRatio = -std::numeric_limits<double>::infinity();
    for (auto& re : rows) {
        if (re.mn < rep.minRatio) {
            rep.minRatio = re.mn;
            rep.argminX = re.mnX;
            rep.argminV = re.mnV;
        }
        if (re.mx > rep.maxRatio) {
            rep.maxRatio = re.mx;
            rep.argmaxX = re.mxX;
            rep.argmaxV = re.mxV;
        }
    }
    rep.empiricalC = std::max(rep.maxRatio, rep.minRatio > 0.0 ? 1.0 / rep.minRatio :
                              std::numeric_limits<double>::infinity());
    return rep;
}

namespace {

std::pair<double, double> ray_point(const RaySpec& ray, double R) {
    switch (ray.kind) {
        case RayKind::VelocityRay: {
            double v = R / std::hypot(1.0, ray.kappa);
            return {ray.kappa * v, v};
        }
        case RayKind::SpatialRay: {
            double x = R / std::hypot(1.0, ray.kappa);
            return {x, ray.kappa * x};
        }
        case RayKind::DiagonalOffset: {
            // x = w, v = 2(w + iota); |(x,v)| = R
            double io = ray.iota;
            double w = (-4.0 * io + std::sqrt(std::max(5.0 * R * R - 4.0 * io * io, 0.0))) / 5.0;
            return {w, 2.0 * (w + io)};
        }
    }
    throw DomainError("ray_limit: unknown ray kind");
}

} // namespace

RayLimitResult ray_limit(const FracOrder& order, const RaySpec& ray, const QuadSpec& q) {
    q.validate();
    if (ray.radii.size() < 3) throw DomainError("ray_limit: need at least three radii");

    std::vector<double> radii = ray.radii;
    if (order.s != 0.5)
        for (double& r : radii) r = std::min(r, 50.0); // oscillatory cost cap

    RayLimitResult out;
    out.values.resize(radii.size());
    parallel_for(radii.size(), [&](size_t i) {
        auto [x, v] = ray_point(ray, radii[i]);
        double k = kernel_at(order, x, v, q, nullptr);
        out.values[i] = {radii[i], envelope_j(order, x, v) * k};
    });

    switch (ray.kind) {
        case RayKind::VelocityRay: {
            if (!(ray.kappa >= 0.0) || !(ray.kappa <= 0.5))
                throw DomainError("ray_limit: velocity ray needs kappa in [0,1/2]");
            double iota = (ray.kappa < 0.5) ? std::numeric_limits<double>::infinity() : 0.0;
            out.predicted =
                asymptotics::c_s1(order, asymptotics::VelocityRegimeInput(ray.kappa, iota), q).value;
            break;
        }
        case RayKind::DiagonalOffset:
            out.predicted =
                asymptotics::c_s1(order, asymptotics::VelocityRegimeInput(0.5, ray.iota), q).value;
            break;
        case RayKind::SpatialRay:
            out.predicted = asymptotics::c_s3(order, asymptotics::SpatialRegimeInput(ray.kappa),
                                              asymptotics::Route::Auto, q)
                                .value;
            break;
    }

    // Aitken delta^2 on the last three values
    size_t n = out.values.size();
    double v1 = out.values[n - 3].second, v2 = out.values[n - 2].second,
           v3 = out.values[n - 1].second;
    double den = (v3 - v2) - (v2 - v1);
    out.extrapolated = (std::fabs(den) > 1e-300) ? v3 - (v3 - v2) * (v3 - v2) / den : v3;
    return out;
}

} // namespace kinkernel::bounds
