#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "stirlab/flows.hpp"

namespace stirlab {

enum class StartPolicy { FixedPoint, UniformInCell };

struct SdeConfig {
    int M = 1000;
    double dt = 0.0;       // must satisfy the resolution bound; 0 = half the bound
    double T = 1.0;
    std::uint64_t seed = 1;
    StartPolicy start = StartPolicy::UniformInCell;
    std::array<double, 3> x0{0.0, 0.0, 0.0};  // used by FixedPoint
    int threads = 1;
    bool noise = true;  // false integrates the drift ODE (level-set checks)
};

/// M trajectories of dX = sqrt(2) dB - u(X) dt on R^d (Euler-Maruyama).
struct ParticleEnsemble {
    int dim = 2;
    int M = 0;
    double dt = 0.0;
    double elapsed = 0.0;
    double mid_time = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> start;  // M * dim
    std::vector<double> mid;    // positions at mid_time
    std::vector<double> pos;    // positions at elapsed
};

/// dt resolution bound for cell crossing: 0.1 * min(1/nu, 1) / max(1, ||u||_inf).
double sde_dt_bound(const VelocityField& u);

ParticleEnsemble simulate_paths(const VelocityField& u, const SdeConfig& cfg);

struct DiffusivityEstimate {
    std::array<double, 3> e{1.0, 0.0, 0.0};
    double D_hat = 0.0;
    double stderr_ = 0.0;
    double D_mid = 0.0;   // same statistic at the half horizon (bias probe)
    int M = 0;
    double T = 0.0;
    double dt = 0.0;
};

/// D_e = mean over paths of |(X_T - X_0).e|^2 / (2T), with the CLT error.
DiffusivityEstimate estimate_D_e(const ParticleEnsemble& ens, std::array<double, 3> e);

struct DEstimate {
    double D = 0.0;  // min over coordinate directions
    std::vector<DiffusivityEstimate> per_direction;
};

/// Coordinate-direction estimates from one shared ensemble.
DEstimate estimate_D(const VelocityField& u, const SdeConfig& cfg);

struct OccupancyResult {
    int mu = 1;
    double tau = 0.0;
    int M = 0;
    std::vector<double> freq;   // mu^d cell frequencies of X_tau mod 1
    double max_dev = 0.0;       // max |freq - mu^-d|
    double binom_band = 0.0;    // 3 sigma binomial band for one cell
};

/// Empirical cell-occupancy of X_tau started from a fixed point; mu must
/// divide the flow period count nu.
OccupancyResult cell_occupancy(const VelocityField& u, double tau, int mu, int M,
                               std::uint64_t seed, double dt = 0.0, int threads = 1);

/// Mixing-time bound:
/// (6 nu PsiInv(alpha) + 4 ||u||_inf + nu^2)^2 / (4 nu^4 alpha^2 D)
///   + 2/nu^2 + (2 C_d / mu) ln^+(1 / (2 C_d sqrt(alpha) mu^d)).
double bound_7_13(int nu, double alpha, int mu, double u_inf, double D, double C_d, int d);

}  // namespace stirlab
