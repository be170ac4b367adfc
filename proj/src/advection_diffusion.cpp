#include "stirlab/advection_diffusion.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "stirlab/fft.hpp"

namespace stirlab {

namespace {
constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

double weighted_dot(const Grid& g, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double sum = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s)
        sum += g.parseval_weight(s) *
               (a[s].real() * b[s].real() + a[s].imag() * b[s].imag());
    return sum;
}

/// Power iteration on S*S with warm-startable iterate. The forward and
/// adjoint integrators take identical uniform partitions, so the adjoint
/// is the exact transpose of the forward map on the dealiased band.
class NormComputer {
public:
    NormComputer(const VelocityField& u, Grid g, const SolverConfig& cfg, std::uint64_t seed)
        : grid_(g), fwd_(g, u, cfg), adj_(g, rescale(u, 1, -1), cfg),
          v_(SpectralField::random_bandlimited(g, seed, g.dealias_cutoff()).raw()) {}

    NormEstimate compute(double t, double tol, int max_iter = 200) {
        NormEstimate est;
        normalize(v_);
        double sigma_prev = -1.0;
        std::vector<cplx> w;
        for (int it = 1; it <= max_iter; ++it) {
            w = v_;
            fwd_.advance(w, t);
            adj_.advance(w, t);
            double lambda = weighted_dot(grid_, v_, w);
            double sigma = std::sqrt(std::max(lambda, 0.0));
            est.value = sigma;
            est.iterations = it;
            if (it >= 2 && std::abs(sigma - sigma_prev) <= tol * std::max(sigma, 1e-300)) {
                est.converged = true;
                v_ = std::move(w);
                normalize(v_);
                return est;
            }
            sigma_prev = sigma;
            v_ = std::move(w);
            normalize(v_);
        }
        return est;  // converged stays false; value = last Rayleigh estimate
    }

private:
    void normalize(std::vector<cplx>& v) {
        double n2 = weighted_dot(grid_, v, v);
        if (n2 <= 0) return;
        double inv = 1.0 / std::sqrt(n2);
        for (auto& c : v) c *= inv;
    }

    Grid grid_;
    Integrator fwd_, adj_;
    std::vector<cplx> v_;
};

}  // namespace

SpectralField evolve(const SpectralField& phi0, const VelocityField& u, double t,
                     const SolverConfig& cfg) {
    Integrator integ(phi0.grid(), u, cfg);
    SpectralField out = phi0;
    integ.project_band(out.raw());
    integ.advance(out.raw(), t);
    return out;
}

NormEstimate propagator_norm_L2(const VelocityField& u, Grid g, double t, double tol,
                                const SolverConfig& cfg, std::uint64_t seed) {
    NormComputer nc(u, g, cfg, seed);
    return nc.compute(t, tol);
}

double heat_dissipation_time() { return std::log(2.0) / four_pi_sq; }

DissipationEstimate dissipation_time(const VelocityField& u, Grid g, double tol,
                                     const SolverConfig& cfg, double t_max, double norm_tol) {
    DissipationEstimate est;
    est.tol = tol;
    NormComputer nc(u, g, cfg, 20240901);

    double t = heat_dissipation_time();
    double norm = nc.compute(t, norm_tol).value;
    double t_lo = 0.0, t_hi = 0.0;
    if (norm > 0.5) {
        t_lo = t;
        while (true) {
            t *= 2.0;
            if (t > t_max) {
                est.message = "no bracket below t_max=" + std::to_string(t_max);
                return est;
            }
            norm = nc.compute(t, norm_tol).value;
            if (norm <= 0.5) { t_hi = t; break; }
            t_lo = t;
        }
    } else {
        t_hi = t;
        while (true) {
            t *= 0.5;
            if (t < 1e-12) {
                est.message = "bracket collapsed toward t=0";
                return est;
            }
            norm = nc.compute(t, norm_tol).value;
            if (norm > 0.5) { t_lo = t; break; }
            t_hi = t;
        }
    }

    double norm_hi = propagator_norm_L2(u, g, t_hi, norm_tol, cfg).value;
    while (t_hi - t_lo > tol * t_hi) {
        double mid = 0.5 * (t_lo + t_hi);
        double nm = nc.compute(mid, norm_tol).value;
        if (nm > 0.5) {
            t_lo = mid;
        } else {
            t_hi = mid;
            norm_hi = nm;
        }
    }

    est.tau_star = t_hi;
    est.norm_at_tau = norm_hi;
    est.t_lo = t_lo;
    est.t_hi = t_hi;
    est.ok = true;
    return est;
}

std::vector<double> assemble_kernel(const VelocityField& u, Grid g, double t,
                                    const SolverConfig& cfg, int threads) {
    const std::size_t np = g.points();
    std::vector<double> kernel(np * np);
    const double mass_scale = static_cast<double>(np);  // delta value 1/h^d

    auto work = [&](std::size_t y0, std::size_t y1) {
        Integrator integ(g, u, cfg);
        std::vector<double> phys(np);
        std::vector<cplx> spec(g.spectral_size());
        for (std::size_t y = y0; y < y1; ++y) {
            std::fill(phys.begin(), phys.end(), 0.0);
            phys[y] = mass_scale;
            fft::forward(g, phys.data(), spec.data());
            integ.project_band(spec);
            integ.advance(spec, t);
            fft::backward(g, spec.data(), phys.data());
            for (std::size_t x = 0; x < np; ++x) kernel[x * np + y] = phys[x];
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        work(0, np);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (np + threads - 1) / threads;
        for (int i = 0; i < threads; ++i) {
            std::size_t a = i * chunk, b = std::min(np, a + chunk);
            if (a >= b) break;
            pool.emplace_back(work, a, b);
        }
        for (auto& th : pool) th.join();
    }
    return kernel;
}

L1LinfEstimate l1_to_linf_norm(const VelocityField& u, Grid g, double t,
                               const SolverConfig& cfg, int threads) {
    L1LinfEstimate est;
    const int kc = g.dealias_cutoff();
    est.smoothing_time = 3.0 / (four_pi_sq * kc * kc);
    est.delta_resolved = t >= est.smoothing_time;

    auto kernel = assemble_kernel(u, g, t, cfg, threads);
    const std::size_t np = g.points();
    double best = 0.0;
    for (std::size_t x = 0; x < np; ++x) {
        const double* row = kernel.data() + x * np;
        double lo = row[0], hi = row[0];
        for (std::size_t y = 1; y < np; ++y) {
            lo = std::min(lo, row[y]);
            hi = std::max(hi, row[y]);
        }
        best = std::max(best, 0.5 * (hi - lo));
    }
    est.value = best;
    return est;
}

double bound_6_3(double tau_star, double eps, int d, double C_d) {
    auto ln_minus = [](double x) { return std::max(0.0, -std::log(x)); };
    return (C_d + d * ln_minus(tau_star) + 2.0 * ln_minus(eps)) * tau_star;
}

}  // namespace stirlab
