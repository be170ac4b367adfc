#pragma once

#include <cstdint>
#include <string>

#include "stirlab/solver.hpp"

namespace stirlab {

/// Propagator S_{0,t} of d phi/dt + u.grad phi = Lap phi applied to phi0.
/// Constants are invariant and the mean is conserved exactly.
SpectralField evolve(const SpectralField& phi0, const VelocityField& u, double t,
                     const SolverConfig& cfg = {});

struct NormEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Largest singular value of S_{0,t} on the mean-zero subspace, by power
/// iteration on S*S; the adjoint is the propagator of the reversed flow.
NormEstimate propagator_norm_L2(const VelocityField& u, Grid g, double t, double tol = 1e-6,
                                const SolverConfig& cfg = {}, std::uint64_t seed = 20240901);

struct DissipationEstimate {
    double tau_star = 0.0;
    double norm_at_tau = 0.0;
    double t_lo = 0.0, t_hi = 0.0;  // bracket: norm(t_lo) > 1/2 >= norm(t_hi)
    double tol = 0.0;
    bool ok = false;
    std::string message;
};

/// tau_*(u): bracket by doubling/halving from the heat-only value, then
/// bisect to relative width tol (sound because the norm is non-increasing).
DissipationEstimate dissipation_time(const VelocityField& u, Grid g, double tol = 1e-3,
                                     const SolverConfig& cfg = {}, double t_max = 10.0,
                                     double norm_tol = 1e-6);

/// Heat-only dissipation time ln 2 / (4 pi^2).
double heat_dissipation_time();

/// Dense kernel k_t(x,y) on a coarse grid, columns by evolving a discrete
/// delta at every grid point; row-major K[x * npoints + y].
std::vector<double> assemble_kernel(const VelocityField& u, Grid g, double t,
                                    const SolverConfig& cfg = {}, int threads = 1);

struct L1LinfEstimate {
    double value = 0.0;
    bool delta_resolved = true;   // false when t is below the grid smoothing time
    double smoothing_time = 0.0;
};

/// ||S_t||_{L1_0 -> Linf_0} = (1/2) sup_x sup_{y,y'} (k_t(x,y) - k_t(x,y')),
/// the exact dual characterization on the mean-zero subspace.
L1LinfEstimate l1_to_linf_norm(const VelocityField& u, Grid g, double t,
                               const SolverConfig& cfg = {}, int threads = 1);

/// Right-hand side of the mixing-time bound:
/// (C_d + d ln^- tau + 2 ln^- eps) * tau with ln^- x = max(0, -ln x).
double bound_6_3(double tau_star, double eps, int d, double C_d = 10.0);

}  // namespace stirlab
