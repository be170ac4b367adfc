#include "stirlab/reaction_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stirlab/advection_diffusion.hpp"
#include "stirlab/fft.hpp"

namespace stirlab {

IgnitionReaction ignition_reaction(double alpha0, double rate) {
    if (!(alpha0 > 0.0 && alpha0 < 1.0))
        throw std::invalid_argument("ignition_reaction: alpha0 must lie in (0,1)");
    if (!(rate > 0.0)) throw std::invalid_argument("ignition_reaction: rate must be positive");
    IgnitionReaction r;
    r.alpha0 = alpha0;
    r.rate = rate;
    r.f = [alpha0, rate](double y) {
        if (y <= alpha0 || y >= 1.0) return 0.0;
        return rate * (y - alpha0) * (1.0 - y);
    };
    // lambda = sup f(y)/y on (0,1], located by dense sampling
    double best = 0.0;
    const int samples = 200000;
    for (int i = 1; i <= samples; ++i) {
        double y = static_cast<double>(i) / samples;
        best = std::max(best, r.f(y) / y);
    }
    r.lambda = best;
    return r;
}

IgnitionReaction default_ignition(double alpha0) { return ignition_reaction(alpha0, 1.0); }

ReactionOperator::ReactionOperator(Grid g, IgnitionReaction reaction)
    : grid_(g), reaction_(std::move(reaction)), phys_(g.points()) {
    // |f'| <= rate * (1 - alpha0) for the product shape
    rate_bound_ = reaction_.rate * (1.0 - reaction_.alpha0);
}

void ReactionOperator::apply(const std::vector<cplx>& theta, std::vector<cplx>& out) {
    fft::backward(grid_, theta.data(), phys_.data());
    double prod = 0.0;
    for (auto& v : phys_) {
        v = reaction_.f(v);
        prod += v;
    }
    production_ = prod / static_cast<double>(phys_.size());
    fft::forward(grid_, phys_.data(), out.data());
}

const char* to_string(RDStatus s) {
    switch (s) {
        case RDStatus::quenched: return "quenched";
        case RDStatus::burned: return "burned";
        case RDStatus::aborted: return "aborted";
        default: return "undecided";
    }
}

RDResult solve_rd(const SpectralField& theta0, const VelocityField& u,
                  const IgnitionReaction& reaction, double T, const SolverConfig& cfg,
                  const RDConfig& rcfg) {
    RDResult result;
    result.theta0_mean = theta0.mean();
    ReactionOperator rterm(theta0.grid(), reaction);

    bool decided = false;
    auto hook = [&](const SampleDiag& d) -> bool {
        result.range_min = std::min(result.range_min, d.vmin);
        result.range_max = std::max(result.range_max, d.vmax);
        if (d.vmin < -rcfg.range_tol || d.vmax > 1.0 + rcfg.range_tol) {
            result.status = RDStatus::aborted;
            result.t_decided = d.t;
            result.message = "range violation: theta in [" + std::to_string(d.vmin) + ", " +
                             std::to_string(d.vmax) + "]";
            decided = true;
            return false;
        }
        if (d.t > 0 && d.linf <= reaction.alpha0) {
            result.status = RDStatus::quenched;
            result.t_decided = d.t;
            decided = true;
            return false;
        }
        if (std::max(1.0 - d.vmin, d.vmax - 1.0) <= rcfg.burn_tol) {
            result.status = RDStatus::burned;
            result.t_decided = d.t;
            decided = true;
            return false;
        }
        return true;
    };

    result.traj = solve_nonlinear(theta0, u, &rterm, T, cfg, hook);
    if (!decided) {
        if (result.traj.aborted) {
            result.status = RDStatus::aborted;
            result.message = result.traj.abort_reason;
        } else {
            result.status = RDStatus::undecided;
        }
        result.t_decided = result.traj.t_end;
    }
    return result;
}

QuenchSchedule quench_schedule(double alpha0, double theta0_mean, double lambda) {
    if (!(theta0_mean < alpha0))
        throw std::invalid_argument("quench_schedule: requires mean(theta0) < alpha0");
    if (!(lambda > 0.0)) throw std::invalid_argument("quench_schedule: lambda must be positive");
    QuenchSchedule q;
    q.t0 = -std::log((alpha0 + theta0_mean) / (2.0 * alpha0)) / lambda;
    q.eps = 0.5 * (alpha0 - theta0_mean);
    return q;
}

double required_tau_for_quench(double t0, double eps, int d, double C_d) {
    if (!(t0 > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("required_tau_for_quench: t0 and eps must be positive");
    double lo = 0.0, hi = t0 / C_d + 1.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (bound_6_3(mid, eps, d, C_d) <= t0) lo = mid; else hi = mid;
    }
    return lo;
}

}  // namespace stirlab
