#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace stirlab {

/// Adaptive Simpson quadrature to relative tolerance. The integrand must be
/// finite on [a,b]; endpoint singularities are the caller's problem.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-8, int max_depth = 48);

/// Integral with a possibly singular left endpoint: shrinks toward `a`
/// geometrically and returns +inf when the head contributions do not decay.
double integrate_left_open(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-8);

/// Standard normal tail P(Z > x).
double gaussian_tail(double x);
/// Inverse of the tail probability on (0,1), by bisection.
double gaussian_tail_inv(double p);

/// Least-squares line fit; returns {slope, intercept}.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Maximize a unimodal function on [a,b] by golden-section search;
/// returns {argmax, max}.
std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double a,
                                             double b, double tol = 1e-10);

}  // namespace stirlab
