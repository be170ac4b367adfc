#include "stirlab/sde.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "stirlab/math_util.hpp"
#include "stirlab/rng.hpp"

namespace stirlab {

double sde_dt_bound(const VelocityField& u) {
    const double cell = std::min(1.0 / u.cells(), 1.0);
    return 0.1 * cell / std::max(1.0, u.sup_norm());
}

ParticleEnsemble simulate_paths(const VelocityField& u, const SdeConfig& cfg) {
    if (cfg.M < 1) throw std::invalid_argument("simulate_paths: M must be >= 1");
    const double bound = sde_dt_bound(u);
    double dt = cfg.dt;
    if (dt <= 0.0) dt = 0.5 * bound;
    if (dt > bound)
        throw std::invalid_argument("simulate_paths: dt too large; requires dt <= " +
                                    std::to_string(bound));
    const int d = u.dim();
    const long long nsteps = std::max(1LL, std::llround(cfg.T / dt));
    const long long mid_step = nsteps / 2;

    ParticleEnsemble ens;
    ens.dim = d;
    ens.M = cfg.M;
    ens.dt = dt;
    ens.elapsed = nsteps * dt;
    ens.mid_time = mid_step * dt;
    ens.seed = cfg.seed;
    ens.start.resize(static_cast<std::size_t>(cfg.M) * d);
    ens.mid.resize(ens.start.size());
    ens.pos.resize(ens.start.size());

    const double cell = 1.0 / u.cells();
    const double root_2dt = cfg.noise ? std::sqrt(2.0 * dt) : 0.0;

    auto run_path = [&](int m) {
        auto rng = make_rng(cfg.seed, static_cast<std::uint64_t>(m));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double x[3] = {0, 0, 0}, v[3] = {0, 0, 0};
        for (int j = 0; j < d; ++j)
            x[j] = cfg.start == StartPolicy::UniformInCell ? cell * unif(rng) : cfg.x0[j];
        for (int j = 0; j < d; ++j) ens.start[static_cast<std::size_t>(m) * d + j] = x[j];
        for (long long s = 0; s < nsteps; ++s) {
            u.evaluate(x, v);
            for (int j = 0; j < d; ++j) x[j] += root_2dt * gauss(rng) - v[j] * dt;
            if (s + 1 == mid_step)
                for (int j = 0; j < d; ++j) ens.mid[static_cast<std::size_t>(m) * d + j] = x[j];
        }
        for (int j = 0; j < d; ++j) ens.pos[static_cast<std::size_t>(m) * d + j] = x[j];
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (int m = 0; m < cfg.M; ++m) run_path(m);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (cfg.M + threads - 1) / threads;
        for (int tix = 0; tix < threads; ++tix) {
            int a = tix * chunk, b = std::min(cfg.M, a + chunk);
            if (a >= b) break;
            pool.emplace_back([&, a, b] { for (int m = a; m < b; ++m) run_path(m); });
        }
        for (auto& th : pool) th.join();
    }
    return ens;
}

DiffusivityEstimate estimate_D_e(const ParticleEnsemble& ens, std::array<double, 3> e) {
    double elen = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
    if (!(elen > 0)) throw std::invalid_argument("estimate_D_e: zero direction");
    for (auto& c : e) c /= elen;

    DiffusivityEstimate est;
    est.e = e;
    est.M = ens.M;
    est.T = ens.elapsed;
    est.dt = ens.dt;

    const int d = ens.dim;
    double sum = 0.0, sum2 = 0.0, sum_mid = 0.0;
    for (int m = 0; m < ens.M; ++m) {
        double disp = 0.0, disp_mid = 0.0;
        for (int j = 0; j < d; ++j) {
            const std::size_t ix = static_cast<std::size_t>(m) * d + j;
            disp += (ens.pos[ix] - ens.start[ix]) * e[j];
            disp_mid += (ens.mid[ix] - ens.start[ix]) * e[j];
        }
        const double stat = disp * disp / (2.0 * ens.elapsed);
        sum += stat;
        sum2 += stat * stat;
        if (ens.mid_time > 0) sum_mid += disp_mid * disp_mid / (2.0 * ens.mid_time);
    }
    const double n = static_cast<double>(ens.M);
    est.D_hat = sum / n;
    est.D_mid = ens.mid_time > 0 ? sum_mid / n : 0.0;
    const double var = std::max(0.0, sum2 / n - est.D_hat * est.D_hat);
    est.stderr_ = std::sqrt(var / n);
    return est;
}

DEstimate estimate_D(const VelocityField& u, const SdeConfig& cfg) {
    auto ens = simulate_paths(u, cfg);
    DEstimate out;
    out.D = 0.0;
    for (int j = 0; j < u.dim(); ++j) {
        std::array<double, 3> e{0, 0, 0};
        e[j] = 1.0;
        out.per_direction.push_back(estimate_D_e(ens, e));
        double D = out.per_direction.back().D_hat;
        out.D = j == 0 ? D : std::min(out.D, D);
    }
    return out;
}

OccupancyResult cell_occupancy(const VelocityField& u, double tau, int mu, int M,
                               std::uint64_t seed, double dt, int threads) {
    if (mu < 1 || u.cells() % mu != 0)
        throw std::invalid_argument("cell_occupancy: mu must divide the flow cell count");
    SdeConfig cfg;
    cfg.M = M;
    cfg.dt = dt;
    cfg.T = tau;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.start = StartPolicy::FixedPoint;
    const double cell = 1.0 / u.cells();
    cfg.x0 = {0.13 * cell, 0.29 * cell, 0.41 * cell};
    auto ens = simulate_paths(u, cfg);

    OccupancyResult res;
    res.mu = mu;
    res.tau = ens.elapsed;
    res.M = M;
    const int d = ens.dim;
    std::size_t cells = 1;
    for (int j = 0; j < d; ++j) cells *= static_cast<std::size_t>(mu);
    res.freq.assign(cells, 0.0);
    for (int m = 0; m < M; ++m) {
        std::size_t ix = 0;
        for (int j = d - 1; j >= 0; --j) {
            double xj = ens.pos[static_cast<std::size_t>(m) * d + j];
            xj -= std::floor(xj);  // mod 1
            int cj = std::min(mu - 1, static_cast<int>(xj * mu));
            ix = ix * mu + cj;
        }
        res.freq[ix] += 1.0;
    }
    const double p = 1.0 / static_cast<double>(cells);
    for (auto& f : res.freq) {
        f /= M;
        res.max_dev = std::max(res.max_dev, std::abs(f - p));
    }
    res.binom_band = 3.0 * std::sqrt(p * (1.0 - p) / M);
    return res;
}

double bound_7_13(int nu, double alpha, int mu, double u_inf, double D, double C_d, int d) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("bound_7_13: alpha must lie in (0,1)");
    if (nu < 1 || mu < 1 || nu % mu != 0)
        throw std::invalid_argument("bound_7_13: mu must divide nu");
    if (!(D >= 1.0)) throw std::invalid_argument("bound_7_13: requires D >= 1");
    const double psi_inv = gaussian_tail_inv(alpha);
    const double nu2 = static_cast<double>(nu) * nu;
    const double head = 6.0 * nu * psi_inv + 4.0 * u_inf + nu2;
    const double first = head * head / (4.0 * nu2 * nu2 * alpha * alpha * D);
    double mu_d = 1.0;
    for (int j = 0; j < d; ++j) mu_d *= mu;
    const double arg = 1.0 / (2.0 * C_d * std::sqrt(alpha) * mu_d);
    const double third = (2.0 * C_d / mu) * std::max(0.0, std::log(arg));
    return first + 2.0 / nu2 + third;
}

}  // namespace stirlab
