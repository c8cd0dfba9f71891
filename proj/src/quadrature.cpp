#include "kinkernel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace kinkernel::quad {

namespace {

// QUADPACK dqk15 nodes/weights.
const double xgk[8] = {0.991455371120812639206854697526329,
                       0.949107912342758524526189684047851,
                       0.864864423359769072789712788640926,
                       0.741531185599394439863864773280788,
                       0.586087235467691130294144838258730,
                       0.405845151377397166906606412076961,
                       0.207784955007898467600689403773245,
                       0.000000000000000000000000000000000};
const double wgk[8] = {0.022935322010529224963732008058970,
                       0.063092092629978553290700663189204,
                       0.104790010322250183839876322541518,
                       0.140653259715525918745189590510238,
                       0.169004726639267902826583426598550,
                       0.190350578064785409913256402421014,
                       0.204432940075298892414161999234649,
                       0.209482141084727828012999174891714};
const double wg[4] = {0.129484966168869693270611432679082,
                      0.279705391489276667901467771423780,
                      0.381830050505118944950369775488975,
                      0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * xgk[j];
        double f1 = f(c - x), f2 = f(c + x);
        resk += wgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
    }
    Panel p{a, b, resk * h, 0.0};
    p.error = std::fabs((resk - resg) * h);
    // QUADPACK-style sharpening of the raw difference
    if (p.error > 0.0) p.error = std::min(p.error, 200.0 * p.error * std::sqrt(p.error / std::max(std::fabs(p.value), 1e-300)));
    return p;
}

} // namespace

Result gk15(const std::function<double(double)>& f, double a, double b) {
    Panel p = gk15_panel(f, a, b);
    return {p.value, p.error, 1};
}

Result adaptive(const std::function<double(double)>& f, double a, double b,
                const std::vector<double>& splits, double absTol, double relTol,
                int maxPanels) {
    std::vector<double> pts;
    pts.push_back(a);
    for (double s : splits)
        if (s > a && s < b) pts.push_back(s);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::priority_queue<Panel> heap;
    double value = 0.0, error = 0.0;
    int panels = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        Panel p = gk15_panel(f, pts[i], pts[i + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
        ++panels;
    }
    while (error > std::max(absTol, relTol * std::fabs(value))) {
        if (panels >= maxPanels)
            throw ConvergenceError("adaptive quadrature: panel budget exhausted", value, error);
        Panel worst = heap.top();
        if (worst.error <= 0.0) break;
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break; // interval at machine resolution
        Panel l = gk15_panel(f, worst.a, mid);
        Panel r = gk15_panel(f, mid, worst.b);
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++panels;
    }
    return {value, std::max(error, 0.0), panels};
}

Result geometric_to_zero(const std::function<double(double)>& f, double b,
                         double stopBelow, double edgeBelow, double absTol,
                         double relTol, int maxPanels) {
    Result total;
    double hi = b;
    int used = 0;
    while (hi > 1e-300) {
        double lo = 0.5 * hi;
        Result r = adaptive(f, lo, hi, absTol, relTol, std::max(16, maxPanels / 8));
        total.value += r.value;
        total.error += r.error;
        total.panels += r.panels;
        used += r.panels;
        if (used > maxPanels)
            throw ConvergenceError("geometric refinement: panel budget exhausted", total.value, total.error);
        if (std::fabs(r.value) < stopBelow && lo < edgeBelow) {
            total.error += std::fabs(r.value); // bound the skipped remainder by the last panel
            break;
        }
        hi = lo;
    }
    return total;
}

Result tanh_sinh(const std::function<double(double)>& f, double a, double b, double absTol) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double edgeGuard = 32.0 * 2.3e-16 * std::max({std::fabs(a), std::fabs(b), 1.0});
    const double umax = 6.0;

    auto node_sum = [&](double h, bool oddOnly) {
        // sum over u = k h (odd k only when refining a previous level)
        double acc = 0.0;
        int k0 = oddOnly ? 1 : 0;
        int kstep = oddOnly ? 2 : 1;
        for (int k = k0;; k += kstep) {
            double u = k * h;
            if (u > umax) break;
            double sh = 0.5 * M_PI * std::sinh(u);
            double w = 0.5 * M_PI * std::cosh(u) / (std::cosh(sh) * std::cosh(sh));
            double tpos = std::tanh(sh);
            double contrib = 0.0;
            // +u node
            double dist = hw * (1.0 - tpos);
            if (dist > edgeGuard) contrib += f(c + hw * tpos) * w;
            // -u node (skip duplicate at k = 0)
            if (k > 0) {
                if (dist > edgeGuard) contrib += f(c - hw * tpos) * w;
            }
            acc += contrib;
            if (u > 3.0 && std::fabs(contrib) * hw * h < absTol * 1e-3) break;
        }
        return acc;
    };

    double h = 0.5;
    double sum = node_sum(h, false);
    double prev = sum * h * hw;
    Result out{prev, std::fabs(prev), 1};
    for (int level = 0; level < 6; ++level) {
        h *= 0.5;
        sum += node_sum(h, true);
        double cur = sum * h * hw;
        out.error = std::fabs(cur - prev);
        out.value = cur;
        ++out.panels;
        prev = cur;
        if (out.error <= absTol) break;
    }
    return out;
}

double exp_power_tail_bound(double c, double p, double R) {
    // int_R^inf e^{-c t^p} dt = (1/p) c^{-1/p} Gamma(1/p, cR^p)
    // <= (1/p) c^{-1/p} y^{1/p-1} e^{-y} / (1 - (1/p-1)/y)  with y = cR^p,
    // valid when y > max(1/p - 1, 0) + 1; otherwise fall back to a crude cap.
    double y = c * std::pow(R, p);
    double a = 1.0 / p;
    if (y <= std::max(a - 1.0, 0.0) + 1.0) return std::exp(-y) * (R + 1.0 / (c * p * std::pow(R, p - 1.0)));
    double bound = (1.0 / p) * std::pow(c, -a) * std::pow(y, a - 1.0) * std::exp(-y);
    double corr = 1.0 - (a - 1.0) / y;
    if (corr < 0.1) corr = 0.1;
    return bound / corr;
}

} // namespace kinkernel::quad
