#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stirlab/flows.hpp"
#include "stirlab/spectral_field.hpp"

namespace stirlab {

/// Time-stepping parameters for the integrating-factor Heun scheme
/// (exact diffusion factor composed with explicit 2nd-order transport).
struct SolverConfig {
    double dt = 0.0;      // 0 = auto from the CFL bound
    double cfl = 0.5;
    bool dealias = true;  // 2/3 truncation after every product
    double sample_dt = 0.0;          // 0 = samples only at start/end
    std::vector<double> snapshot_times;
    bool adaptive = false;           // recompute dt from solution speeds
    double dt_min = 1e-12;
    long long max_steps = 400'000'000LL;
    int tail_band_lo = 0;            // 0 = top third of the run's dealiased band
};

/// Pluggable nonlinearity N(theta): spectral in, mean-zero spectral out.
class NonlinearOperator {
public:
    virtual ~NonlinearOperator() = default;
    virtual void apply(const std::vector<cplx>& theta, std::vector<cplx>& out) = 0;
    /// Advective speed beyond the prescribed flow, from the last apply().
    virtual double extra_speed() const { return 0.0; }
    /// Zeroth-order stiffness bound (1/time), from the last apply().
    virtual double max_rate() const { return 0.0; }
};

/// One IF-Heun step integrator bound to a grid, flow and optional
/// nonlinearity. State lives in the dealiased band.
class Integrator {
public:
    Integrator(Grid g, const VelocityField& u, SolverConfig cfg,
               NonlinearOperator* nonlinear = nullptr);

    const Grid& grid() const { return grid_; }
    double u_sup() const { return u_sup_; }

    /// Advective CFL bound; +inf when the flow is zero and N has no speed.
    double cfl_dt(double extra_speed = 0.0, double rate = 0.0) const;

    void set_dt(double dt);
    double dt() const { return dt_; }

    /// One IF-Heun step of the current dt, in place.
    void step(std::vector<cplx>& phi);

    /// Advance by exactly `duration` using uniform steps of at most the
    /// current CFL bound (or cfg.dt when positive). Fixed partition;
    /// suitable for linear problems and for adjoint consistency.
    void advance(std::vector<cplx>& phi, double duration);

    NonlinearOperator* nonlinear() { return nonlinear_; }

    void project_band(std::vector<cplx>& phi) const;

private:
    void tendency(const std::vector<cplx>& phi, std::vector<cplx>& out);

    Grid grid_;
    SolverConfig cfg_;
    NonlinearOperator* nonlinear_;
    std::vector<std::vector<double>> u_phys_;
    double u_sup_ = 0.0;
    double dt_ = 0.0;
    std::vector<double> heat_;       // exp(-4 pi^2 |k|^2 dt)
    std::vector<double> mask_;       // dealias keep mask (1/0)
    std::vector<double> kfac_[3];    // 2 pi k_j (Nyquist zeroed)
    // scratch
    std::vector<cplx> spec_a_, spec_b_, t1_, t2_, star_;
    std::vector<double> phys_a_, phys_b_;
};

struct SampleDiag {
    double t = 0;
    double l2 = 0;        // ||theta||_2
    double h1 = 0;        // ||grad theta||_2
    double linf = 0;
    double vmin = 0, vmax = 0;
    double mean = 0;
    double tail = 0;      // fluctuation energy fraction in the top third band
};

struct Trajectory {
    std::vector<SampleDiag> samples;
    std::vector<std::pair<double, SpectralField>> snapshots;
    SpectralField final_state;
    double t_end = 0;
    bool aborted = false;
    std::string abort_reason;
    long long steps = 0;

    const SampleDiag& last() const { return samples.back(); }
};

/// Per-sample hook; return false to stop the run (early verdicts).
using SampleHook = std::function<bool(const SampleDiag&)>;

/// Mild-solution time stepping for d theta/dt + u.grad theta = Lap theta + N(theta).
/// theta0 is projected to the dealiased band; the mean is preserved exactly.
Trajectory solve_nonlinear(const SpectralField& theta0, const VelocityField& u,
                           NonlinearOperator* N, double T, const SolverConfig& cfg,
                           const SampleHook& hook = {});

}  // namespace stirlab
