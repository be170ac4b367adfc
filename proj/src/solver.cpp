#include "stirlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "stirlab/fft.hpp"

namespace stirlab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;
}  // namespace

Integrator::Integrator(Grid g, const VelocityField& u, SolverConfig cfg,
                       NonlinearOperator* nonlinear)
    : grid_(g), cfg_(cfg), nonlinear_(nonlinear) {
    if (!u.is_zero()) {
        if (g.n < 8 * u.cells())
            throw std::invalid_argument("Integrator: grid must satisfy n >= 8*cells");
        u_phys_ = u.sample_physical(g);
        u_sup_ = u.sup_norm();
    }
    const std::size_t ns = g.spectral_size();
    mask_.resize(ns);
    for (std::size_t s = 0; s < ns; ++s)
        mask_[s] = (!cfg_.dealias || g.in_dealias_band(s)) ? 1.0 : 0.0;
    const int nyq = g.n / 2;
    for (int j = 0; j < g.dim; ++j) {
        kfac_[j].resize(ns);
        for (std::size_t s = 0; s < ns; ++s) {
            auto k = g.wavevector(s);
            kfac_[j][s] = (std::abs(k[j]) == nyq) ? 0.0 : two_pi * k[j];
        }
    }
    spec_a_.resize(ns);
    t1_.resize(ns);
    t2_.resize(ns);
    star_.resize(ns);
    phys_a_.resize(g.points());
    phys_b_.resize(g.points());
}

double Integrator::cfl_dt(double extra_speed, double rate) const {
    double dt = std::numeric_limits<double>::infinity();
    const double speed = u_sup_ + extra_speed;
    if (speed > 0) dt = std::min(dt, cfg_.cfl * grid_.spacing() / speed);
    if (rate > 0) dt = std::min(dt, cfg_.cfl / rate);
    return dt;
}

void Integrator::set_dt(double dt) {
    if (!(dt > 0)) throw std::invalid_argument("Integrator: dt must be positive");
    if (dt == dt_) return;
    dt_ = dt;
    const std::size_t ns = grid_.spectral_size();
    heat_.resize(ns);
    for (std::size_t s = 0; s < ns; ++s)
        heat_[s] = std::exp(-four_pi_sq * grid_.k_squared(s) * dt);
}

void Integrator::project_band(std::vector<cplx>& phi) const {
    for (std::size_t s = 0; s < phi.size(); ++s) phi[s] *= mask_[s];
}

// out = -dealias(u . grad phi) + N(phi); the k=0 mode is zeroed exactly.
void Integrator::tendency(const std::vector<cplx>& phi, std::vector<cplx>& out) {
    const std::size_t ns = grid_.spectral_size();
    const std::size_t np = grid_.points();
    if (!u_phys_.empty()) {
        std::fill(phys_b_.begin(), phys_b_.end(), 0.0);
        for (int j = 0; j < grid_.dim; ++j) {
            const auto& kf = kfac_[j];
            for (std::size_t s = 0; s < ns; ++s)
                spec_a_[s] = cplx(-kf[s] * phi[s].imag(), kf[s] * phi[s].real());
            fft::backward(grid_, spec_a_.data(), phys_a_.data());
            const auto& uj = u_phys_[j];
            for (std::size_t p = 0; p < np; ++p) phys_b_[p] += uj[p] * phys_a_[p];
        }
        fft::forward(grid_, phys_b_.data(), out.data());
        for (std::size_t s = 0; s < ns; ++s) out[s] *= -mask_[s];
        out[0] = 0.0;
    } else {
        std::fill(out.begin(), out.end(), cplx(0));
    }
    if (nonlinear_) {
        nonlinear_->apply(phi, spec_a_);
        for (std::size_t s = 0; s < ns; ++s) out[s] += mask_[s] * spec_a_[s];
        out[0] = cplx(out[0].real(), 0.0);  // N is mean-zero by contract
    }
}

void Integrator::step(std::vector<cplx>& phi) {
    const std::size_t ns = grid_.spectral_size();
    tendency(phi, t1_);
    for (std::size_t s = 0; s < ns; ++s)
        star_[s] = heat_[s] * (phi[s] + dt_ * t1_[s]);
    tendency(star_, t2_);
    const double half = 0.5 * dt_;
    for (std::size_t s = 0; s < ns; ++s)
        phi[s] = heat_[s] * (phi[s] + half * t1_[s]) + half * t2_[s];
}

void Integrator::advance(std::vector<cplx>& phi, double duration) {
    if (duration <= 0) return;
    double bound = cfl_dt();
    if (cfg_.dt > 0) {
        if (std::isfinite(bound) && cfg_.dt > bound * (1.0 + 1e-9))
            throw std::invalid_argument("CFL violation: dt=" + std::to_string(cfg_.dt) +
                                        " exceeds bound " + std::to_string(bound));
        bound = std::min(bound, cfg_.dt);
    }
    long long nsteps = 1;
    if (std::isfinite(bound) && bound < duration)
        nsteps = static_cast<long long>(std::ceil(duration / bound));
    set_dt(duration / static_cast<double>(nsteps));
    for (long long i = 0; i < nsteps; ++i) step(phi);
}

namespace {

SampleDiag measure(const Grid& g, const std::vector<cplx>& phi, double t, int band_lo) {
    SampleDiag d;
    d.t = t;
    d.mean = phi[0].real();
    double sum2 = 0.0, sumh = 0.0, tail = 0.0, fluct = 0.0;
    if (band_lo <= 0) band_lo = (2 * g.dealias_cutoff() + 2) / 3;
    for (std::size_t s = 0; s < phi.size(); ++s) {
        const double w = g.parseval_weight(s);
        const double e = w * std::norm(phi[s]);
        const double k2 = g.k_squared(s);
        sumh += four_pi_sq * k2 * e;
        if (s > 0) {
            sum2 += e;
            fluct += e;
            auto k = g.wavevector(s);
            int kinf = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
            if (kinf >= band_lo) tail += e;
        }
    }
    d.l2 = std::sqrt(sum2);
    d.h1 = std::sqrt(sumh);
    d.tail = fluct > 0 ? tail / fluct : 0.0;
    std::vector<double> phys(g.points());
    fft::backward(g, phi.data(), phys.data());
    double lo = phys[0], hi = phys[0], li = 0.0;
    for (double v : phys) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        li = std::max(li, std::abs(v));
    }
    d.vmin = lo;
    d.vmax = hi;
    d.linf = li;
    return d;
}

bool healthy(const std::vector<cplx>& phi) {
    // cheap instability probe; full norms are checked at samples
    return std::isfinite(phi[0].real()) && std::isfinite(phi[1].real()) &&
           std::isfinite(phi[1].imag());
}

}  // namespace

Trajectory solve_nonlinear(const SpectralField& theta0, const VelocityField& u,
                           NonlinearOperator* N, double T, const SolverConfig& cfg,
                           const SampleHook& hook) {
    const Grid g = theta0.grid();
    Integrator integ(g, u, cfg, N);
    Trajectory traj;

    std::vector<cplx> phi = theta0.raw();
    integ.project_band(phi);

    std::vector<cplx> last_good = phi;
    double last_good_t = 0.0;

    auto snap_times = cfg.snapshot_times;
    std::sort(snap_times.begin(), snap_times.end());
    std::size_t next_snap = 0;

    const double sample_dt = cfg.sample_dt > 0 ? cfg.sample_dt : T;
    double next_sample = 0.0;

    if (cfg.adaptive && N) {
        // prime the speed/rate estimates before the first dt decision
        std::vector<cplx> scratch(phi.size());
        N->apply(phi, scratch);
    }

    auto take_sample = [&](double t) -> bool {
        SampleDiag d = measure(g, phi, t, cfg.tail_band_lo);
        traj.samples.push_back(d);
        if (!std::isfinite(d.l2) || !std::isfinite(d.linf)) {
            traj.aborted = true;
            traj.abort_reason = "non-finite state at t=" + std::to_string(t);
            return false;
        }
        last_good = phi;
        last_good_t = t;
        if (hook && !hook(d)) return false;
        return true;
    };

    bool keep_going = take_sample(0.0);
    next_sample = sample_dt;

    double t = 0.0;
    while (keep_going && t < T * (1.0 - 1e-14)) {
        // dt: fixed from the static bounds, or adaptive from solution speeds
        double extra = 0.0, rate = 0.0;
        if (N) {
            extra = N->extra_speed();
            rate = N->max_rate();
        }
        double bound = cfg.adaptive ? integ.cfl_dt(extra, rate) : integ.cfl_dt(0.0, rate);
        if (cfg.dt > 0) bound = std::min(bound, cfg.dt);
        if (!std::isfinite(bound)) bound = T;
        double dt = std::min(bound, T - t);
        double stop = std::min(next_sample, T);
        if (next_snap < snap_times.size()) stop = std::min(stop, snap_times[next_snap]);
        if (t + dt > stop) dt = stop - t;
        if (dt < cfg.dt_min) {
            traj.aborted = true;
            traj.abort_reason = "time step underflow (dt=" + std::to_string(dt) + ")";
            break;
        }

        integ.set_dt(dt);
        integ.step(phi);
        t += dt;
        ++traj.steps;
        if (traj.steps > cfg.max_steps) {
            traj.aborted = true;
            traj.abort_reason = "step budget exceeded";
            break;
        }
        if (!healthy(phi)) {
            traj.aborted = true;
            traj.abort_reason = "non-finite state at t=" + std::to_string(t);
            break;
        }

        if (next_snap < snap_times.size() && t >= snap_times[next_snap] * (1.0 - 1e-12)) {
            SpectralField snap(g, theta0.label());
            snap.raw() = phi;
            traj.snapshots.emplace_back(t, std::move(snap));
            ++next_snap;
        }
        if (t >= next_sample * (1.0 - 1e-12) || t >= T * (1.0 - 1e-14)) {
            keep_going = take_sample(t);
            while (next_sample <= t * (1.0 + 1e-12)) next_sample += sample_dt;
        }
    }

    traj.final_state = SpectralField(g, theta0.label());
    traj.final_state.raw() = traj.aborted ? last_good : phi;
    traj.t_end = traj.aborted ? last_good_t : t;
    return traj;
}

}  // namespace stirlab
