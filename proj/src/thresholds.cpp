#include "stirlab/thresholds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "stirlab/math_util.hpp"

namespace stirlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// int_{lo}^{hi} y / F(y) dy with F increasing; +inf when F vanishes on an
/// interior subinterval or the left-endpoint singularity does not integrate.
double member_integral(double lo, double hi, const std::function<double(double)>& F,
                       double rel_tol) {
    if (!(hi > lo)) return 0.0;
    // F increasing: a zero anywhere right of lo means F == 0 on [lo, y].
    for (int m = 64; m >= 1; --m) {
        double y = lo + (hi - lo) * m / 64.0;
        if (F(y) <= 0.0) return kInf;
    }
    auto integrand = [&](double y) { return y / F(y); };
    if (F(lo) > 0.0) return integrate_adaptive(integrand, lo, hi, rel_tol);
    return integrate_left_open(integrand, lo, hi, rel_tol);
}

double member_ratio(double numer, double denom) {
    if (denom > 0.0) return numer / denom;
    return numer == 0.0 ? 0.0 : kInf;
}

}  // namespace

double threshold_T0(double B, const NonlinearHypotheses& hyp, double rel_tol) {
    if (B < 0) throw std::invalid_argument("threshold_T0: B must be >= 0");
    const double top = 2.0 * B + 1.0;
    const double m2 =
        member_ratio(B, 2.0 * hyp.C0 / hyp.eps0 * hyp.F(top) + 2.0 * hyp.G(top));
    if (m2 == 0.0) return 0.0;
    const double m1 = member_integral(B, top, hyp.F, rel_tol);
    return std::min(m1, m2);
}

double threshold_T1(double B, const NonlinearHypotheses& hyp, double rel_tol) {
    if (B < 0) throw std::invalid_argument("threshold_T1: B must be >= 0");
    if (B == 0.0) return kInf;
    double best = kInf;
    const double b_min = B * 1e-6;
    for (double b = B; b >= b_min; b *= 0.5) {
        const double m2 =
            member_ratio(b, 4.0 * hyp.C0 / hyp.eps0 * hyp.F(2.0 * b) + 4.0 * hyp.G(2.0 * b));
        double candidate = m2;
        if (m2 > 0.0) {
            const double m1 = member_integral(b, 2.0 * b, hyp.F, rel_tol);
            candidate = std::min(m1, m2);
        }
        best = std::min(best, candidate);
        if (best == 0.0) break;
    }
    return best;
}

double psi_step(double B, double eps0, double C0) {
    double cap = C0 > 0.0 ? eps0 / (8.0 * C0) : kInf;
    return B - std::min(B / 16.0, cap);
}

double psi_envelope(double B0, int n, double eps0, double C0) {
    if (n < 0) throw std::invalid_argument("psi_envelope: n must be >= 0");
    double b = B0;
    for (int i = 0; i < n; ++i) b = psi_step(b, eps0, C0);
    return b;
}

double optimized_decay_rate(double tau_star, const NonlinearHypotheses& hyp, double B_small) {
    const double t1 = threshold_T1(B_small, hyp);
    return 0.5 - tau_star / (4.0 * t1);
}

}  // namespace stirlab
