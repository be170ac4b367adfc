#include "stirlab/math_util.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stirlab {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = simpson(f, a, fa, b, fb, m, fm);
    const double eps = rel_tol * std::max(std::abs(whole), 1e-300);
    return adapt(f, a, fa, b, fb, m, fm, whole, eps, max_depth);
}

double integrate_left_open(const std::function<double(double)>& f, double a, double b,
                           double rel_tol) {
    if (!(b > a)) return 0.0;
    double delta = (b - a) * 1e-2;
    double total = integrate_adaptive(f, a + delta, b, rel_tol);
    double prev_piece = std::numeric_limits<double>::infinity();
    int flat = 0;
    for (int k = 0; k < 60; ++k) {
        double next = delta * 0.25;
        double piece = integrate_adaptive(f, a + next, a + delta, rel_tol);
        if (!std::isfinite(piece)) return std::numeric_limits<double>::infinity();
        total += piece;
        if (piece <= rel_tol * std::max(std::abs(total), 1e-300)) return total;
        // head contributions that stop shrinking signal divergence
        if (piece >= 0.9 * prev_piece) {
            if (++flat >= 4) return std::numeric_limits<double>::infinity();
        } else {
            flat = 0;
        }
        prev_piece = piece;
        delta = next;
    }
    return std::numeric_limits<double>::infinity();
}

double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gaussian_tail_inv(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("gaussian_tail_inv: p must lie in (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++i) {
        double mid = 0.5 * (lo + hi);
        if (gaussian_tail(mid) > p) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need matching vectors of size >= 2");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / n};
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double a,
                                             double b, double tol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace stirlab
