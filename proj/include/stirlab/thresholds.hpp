#pragma once

#include <functional>

namespace stirlab {

/// Growth hypotheses of the nonlinearity: |int theta N(theta)| <=
/// (1 - eps0) ||grad theta||^2 + F(||theta||), and ||N(theta)|| <=
/// C0 ||grad theta||^2 + G(||theta||), with F, G increasing continuous.
struct NonlinearHypotheses {
    std::function<double(double)> F;
    std::function<double(double)> G;
    double eps0 = 1.0;  // in (0, 1]
    double C0 = 0.0;
};

/// T0(B) = min{ int_B^{2B+1} y/F(y) dy,
///              B / (2 C0/eps0 F(2B+1) + 2 G(2B+1)) }.
/// A vanishing F on the integration range makes the integral +inf; both
/// members infinite returns the +inf sentinel.
double threshold_T0(double B, const NonlinearHypotheses& hyp, double rel_tol = 1e-9);

/// T1(B) = inf_{b in (0,B]} min{ int_b^{2b} y/F(y) dy,
///                               b / (4 C0/eps0 F(2b) + 4 G(2b)) },
/// discretized on the geometric grid b in {B, B/2, ...} down to B*1e-6
/// (an upper bound on the continuum infimum). T1(0) = +inf.
double threshold_T1(double B, const NonlinearHypotheses& hyp, double rel_tol = 1e-9);

/// One application of the contraction envelope Psi(B) = B - min{B/16, eps0/(8 C0)}.
double psi_step(double B, double eps0, double C0);
/// n-fold composition Psi^n(B0).
double psi_envelope(double B0, int n, double eps0, double C0);

/// Optimized per-cycle contraction estimate 1/2 - tau_star / (4 T1(B_small)),
/// exposed for reporting only (no acceptance claim attaches to it).
double optimized_decay_rate(double tau_star, const NonlinearHypotheses& hyp,
                            double B_small = 1e-6);

}  // namespace stirlab
