#include "kinkernel/closed_half.hpp"
#include "kinkernel/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace kinkernel::closed_half {

namespace {
const double SQRT2 = std::sqrt(2.0);
const double PI2 = M_PI * M_PI;
} // namespace

double k_half(double x, double v) {
    const double X = std::fabs(x), V = std::fabs(v);
    const double A = 1.0 + v * v;
    const double S = std::hypot(A, 4.0 * x);     // sqrt(A^2 + 16 x^2)
    const double P = std::sqrt(S + A);
    const double M = 4.0 * X / P;                // = sqrt(S - A) without cancellation
    const double S3 = S * S * S;

    const double term1 = 2.0 / (S * S);

    // log term: coefficient is O(|x|), log argument is 1 - O(|x|); log1p keeps
    // the product accurate down to x = 0 (where it vanishes).
    const double y = 4.0 * SQRT2 * X / (2.0 * SQRT2 * X + (4.0 * x * x + S) / P);
    const double logcoef = (4.0 * X * P + A * M) / (4.0 * SQRT2 * S3);
    const double term2 = (X > 0.0) ? logcoef * std::log1p(-y) : 0.0;

    const double atancoef = (A * P - 4.0 * X * M) / (2.0 * SQRT2 * S3);
    const double dplus = P + SQRT2 * V;
    const double dminus = P - SQRT2 * V; // >= 2/(P + sqrt2 V) > 0 always
    const double at = std::atan((SQRT2 - M) / dplus) + std::atan((SQRT2 + M) / dplus) +
                      std::atan((SQRT2 + M) / dminus) + std::atan((SQRT2 - M) / dminus);
    const double term3 = atancoef * at;

    return (2.0 / PI2) * (term1 + term2 + term3);
}

double F_integrand(const AppendixArgs& args, double x) {
    const double u = x * x + 1.0;
    const double w = 2.0 * (args.a + args.b * x);
    const double num = u * u - w * w;
    const double den = u * u + w * w;
    return 2.0 * num / (den * den);
}

double F_closed(const AppendixArgs& args) {
    const double a = args.a, b = args.b;
    const double A = 1.0 + b * b;
    const double S = std::hypot(A, 2.0 * a);
    const double P = std::sqrt(S + A);
    const double M = 2.0 * a / P; // sqrt(S - A), stable
    const double S3 = S * S * S;

    const double rational =
        ((b * b + 1.0 - a * a) * A * A - 2.0 * a * a * a * a) /
        ((S * S) * (a * a * a * a - 2.0 * a * a * (b * b - 1.0) + A * A));

    double logterm = 0.0;
    if (a > 0.0) {
        const double y = 2.0 * SQRT2 * a * P / (SQRT2 * a * P + a * a + S);
        const double logcoef = (2.0 * a * P + A * M) / (4.0 * SQRT2 * S3);
        logterm = logcoef * std::log1p(-y);
    }

    const double atancoef = (A * P - 2.0 * a * M) / (2.0 * SQRT2 * S3);
    const double dplus = SQRT2 * b + P;
    const double dminus = P - SQRT2 * b;
    const double at = std::atan((SQRT2 - M) / dplus) + std::atan((SQRT2 + M) / dplus) +
                      std::atan((SQRT2 + M) / dminus) + std::atan((SQRT2 - M) / dminus);

    return rational + logterm + atancoef * at;
}

double k_half_semi(double x, double v, const QuadSpec& q) {
    q.validate();
    const double X = std::fabs(x), V = std::fabs(v);
    const double plus = 2.0 * X + V, minus = 2.0 * X - V;
    const double t1 = (2.0 / PI2) * (1.0 + 4.0 * x * x - v * v) /
                      ((1.0 + plus * plus) * (1.0 + minus * minus));

    AppendixArgs ab(2.0 * X, V);
    // integrand peaks near w = -2|x|/|v|; give the adaptive pass that hint
    std::vector<double> splits;
    if (V > 0.0) {
        double w0 = std::clamp(-2.0 * X / V, -0.999, 0.999);
        splits.push_back(w0);
    } else {
        splits.push_back(0.0);
    }
    auto r = quad::adaptive([&](double w) { return F_integrand(ab, w); }, -1.0, 1.0, splits,
                            q.absTol, q.relTol, q.maxPanels);
    return t1 + (2.0 / PI2) * r.value;
}

} // namespace kinkernel::closed_half
