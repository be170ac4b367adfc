#pragma once

#include <functional>
#include <string>

#include "stirlab/solver.hpp"

namespace stirlab {

/// Ignition nonlinearity: f = 0 on [0, alpha0] and at 1, positive between.
struct IgnitionReaction {
    double alpha0 = 0.5;
    double rate = 1.0;                 // amplitude multiplier on the default shape
    std::function<double(double)> f;
    double lambda = 0.0;               // sup_{y in (0,1]} f(y)/y, sampled
};

/// f(theta) = (theta - alpha0)(1 - theta) on [alpha0, 1], 0 elsewhere.
IgnitionReaction default_ignition(double alpha0);
/// Same shape scaled by `rate`; rate = 1 reproduces default_ignition.
IgnitionReaction ignition_reaction(double alpha0, double rate);

/// Pointwise reaction term evaluated in physical space.
class ReactionOperator : public NonlinearOperator {
public:
    ReactionOperator(Grid g, IgnitionReaction reaction);
    void apply(const std::vector<cplx>& theta, std::vector<cplx>& out) override;
    double max_rate() const override { return rate_bound_; }
    double last_production() const { return production_; }  // int f(theta) dx

private:
    Grid grid_;
    IgnitionReaction reaction_;
    double rate_bound_ = 0.0;
    double production_ = 0.0;
    std::vector<double> phys_;
};

enum class RDStatus { quenched, burned, undecided, aborted };
const char* to_string(RDStatus s);

struct RDConfig {
    double burn_tol = 1e-3;    // ||1 - theta||_inf threshold for "burned"
    double range_tol = 1e-6;   // allowed undershoot/overshoot of [0,1]
};

struct RDResult {
    Trajectory traj;
    RDStatus status = RDStatus::undecided;
    double t_decided = 0.0;
    double theta0_mean = 0.0;
    double range_min = 0.0, range_max = 1.0;  // extremes seen over the run
    std::string message;
};

/// Ignition reaction-diffusion with drift. Quenched when ||theta||_inf <=
/// alpha0; burned when ||1 - theta||_inf <= burn_tol; range violations
/// beyond range_tol abort the run with diagnostics.
RDResult solve_rd(const SpectralField& theta0, const VelocityField& u,
                  const IgnitionReaction& reaction, double T, const SolverConfig& cfg,
                  const RDConfig& rcfg = {});

/// Quenching schedule from the comparison argument:
/// t0 = -(1/lambda) ln((alpha0 + mean0)/(2 alpha0)), eps = (alpha0 - mean0)/2.
/// Requires mean0 < alpha0 (otherwise no schedule exists).
struct QuenchSchedule {
    double t0 = 0.0;
    double eps = 0.0;
};
QuenchSchedule quench_schedule(double alpha0, double theta0_mean, double lambda);

/// Largest tau with (C_d + d ln^- tau + 2 ln^- eps) tau <= t0, by bisection
/// on the monotone right-hand side.
double required_tau_for_quench(double t0, double eps, int d, double C_d = 10.0);

}  // namespace stirlab
