// Acceptance suite: one pass/fail line per criterion. Run with no
// arguments for the full gate, or with criterion numbers to run a subset.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "stirlab/advection_diffusion.hpp"
#include "stirlab/cell_problem.hpp"
#include "stirlab/fft.hpp"
#include "stirlab/keller_segel.hpp"
#include "stirlab/math_util.hpp"
#include "stirlab/reaction_diffusion.hpp"
#include "stirlab/sde.hpp"
#include "stirlab/thresholds.hpp"

using namespace stirlab;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;
constexpr double four_pi_sq = 4.0 * pi * pi;

struct Check {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---- criterion 1: heat-only dissipation time ------------------------------

bool c1_heat_tau(std::string& detail) {
    Grid g = Grid::make(2, 32);
    auto est = dissipation_time(zero_flow(2), g, 1e-3);
    const double expected = heat_dissipation_time();
    detail = "tau=" + fmt(est.tau_star) + " expected=" + fmt(expected) +
             " |diff|=" + fmt(std::abs(est.tau_star - expected));
    return est.ok && std::abs(est.tau_star - expected) <= 1e-4;
}

// ---- criterion 2: power iteration vs dense SVD ----------------------------

bool c2_norm_oracle(std::string& detail) {
    Grid g = Grid::make(2, 16);
    auto u = cellular2d(5.0);
    const double t = 0.02;
    SolverConfig cfg;
    auto est = propagator_norm_L2(u, g, t, 1e-10, cfg);

    const auto np = static_cast<Eigen::Index>(g.points());
    Eigen::MatrixXd M(np, np);
    Integrator integ(g, u, cfg);
    std::vector<double> phys(g.points());
    std::vector<cplx> spec(g.spectral_size());
    for (Eigen::Index j = 0; j < np; ++j) {
        std::fill(phys.begin(), phys.end(), 0.0);
        phys[j] = 1.0;
        fft::forward(g, phys.data(), spec.data());
        integ.project_band(spec);
        integ.advance(spec, t);
        fft::backward(g, spec.data(), phys.data());
        for (Eigen::Index i = 0; i < np; ++i) M(i, j) = phys[i];
    }
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(np, np) -
                        Eigen::MatrixXd::Constant(np, np, 1.0 / static_cast<double>(np));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M * P);
    const double oracle = svd.singularValues()(0);
    detail = "power=" + fmt(est.value) + " dense=" + fmt(oracle) +
             " |diff|=" + fmt(std::abs(est.value - oracle));
    return est.converged && std::abs(est.value - oracle) <= 1e-6;
}

// ---- criterion 3: Taylor dispersion ----------------------------------------

bool c3_taylor(std::string& detail) {
    const double A = 4.0;
    const double expected = 1.0 + A * A / (8.0 * pi * pi);

    SdeConfig cfg;
    cfg.M = 10000;
    cfg.T = 20.0;
    cfg.dt = 0.02;
    cfg.seed = 12345;
    auto ens = simulate_paths(shear2d(A), cfg);
    auto mc = estimate_D_e(ens, {1, 0, 0});

    auto cell = cell_problem_D_e(shear2d(A), {1, 0, 0}, Grid::make(2, 32), 1e-10);
    const double mc_rel = std::abs(mc.D_hat - expected) / expected;
    const double cell_err = std::abs(cell.D_e - expected);
    detail = "MC=" + fmt(mc.D_hat) + " (rel err " + fmt(mc_rel) + ", stderr " +
             fmt(mc.stderr_) + "), cell=" + fmt(cell.D_e) + " (|err| " + fmt(cell_err) + ")";
    return mc_rel <= 0.05 && cell.converged && cell_err <= 1e-8;
}

// ---- criterion 4: rescale invariance of D ---------------------------------

bool c4_rescale_invariance(std::string& detail) {
    const double A = 64.0;
    SdeConfig cfg;
    cfg.M = 4000;
    cfg.T = 3.0;
    cfg.seed = 777;
    cfg.threads = 2;
    auto base = estimate_D(cellular2d(A), cfg);
    cfg.seed = 778;
    auto scaled = estimate_D(rescale(cellular2d(A), 2, 1), cfg);  // u^{L}, L = 1/2

    bool ok = true;
    std::string parts;
    for (int j = 0; j < 2; ++j) {
        const auto& a = base.per_direction[j];
        const auto& b = scaled.per_direction[j];
        const double gap = std::abs(a.D_hat - b.D_hat);
        const double band = 3.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
        ok = ok && gap <= band;
        parts += " e" + std::to_string(j + 1) + ": " + fmt(a.D_hat) + " vs " + fmt(b.D_hat) +
                 " (gap " + fmt(gap) + ", 3sigma " + fmt(band) + ")";
    }
    detail = parts;
    return ok;
}

// ---- criterion 5: cellular D ~ A^{1/2} -------------------------------------

bool c5_cellular_scaling(std::string& detail) {
    const std::vector<double> As{64, 128, 256, 512, 1024};
    std::vector<double> lx, ly;
    std::string parts;
    for (double A : As) {
        const int n = A <= 256 ? 256 : 512;
        Grid g = Grid::make(2, n);
        auto d1 = cell_problem_D_e(cellular2d(A), {1, 0, 0}, g, 1e-8);
        auto d2 = cell_problem_D_e(cellular2d(A), {0, 1, 0}, g, 1e-8);
        if (!d1.converged || !d2.converged) {
            detail = "corrector solve failed at A=" + fmt(A) +
                     " residual=" + fmt(std::max(d1.residual, d2.residual));
            return false;
        }
        const double D = std::min(d1.D_e, d2.D_e);
        lx.push_back(std::log(A));
        ly.push_back(std::log(D));
        parts += " D(" + fmt(A) + ")=" + fmt(D);
    }
    const double slope = linear_fit(lx, ly).first;
    detail = "slope=" + fmt(slope) + ";" + parts;
    return slope >= 0.4 && slope <= 0.6;
}

// ---- criterion 6: dissipation-time collapse --------------------------------

bool c6_tau_collapse(std::string& detail) {
    Grid g = Grid::make(2, 64);
    const std::vector<int> nus{1, 2, 4, 8};
    std::vector<double> taus;
    std::string parts;
    for (int nu : nus) {
        auto v = rescale(cellular2d(static_cast<double>(nu)), nu, -1);
        auto est = dissipation_time(v, g, 1e-3);
        if (!est.ok) {
            detail = "no bracket at nu=" + std::to_string(nu) + ": " + est.message;
            return false;
        }
        taus.push_back(est.tau_star);
        parts += " tau(" + std::to_string(nu) + ")=" + fmt(est.tau_star);
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < taus.size(); ++i) decreasing = decreasing && taus[i] < taus[i - 1];
    const double ratio = taus.back() / taus.front();
    detail = parts + "; ratio(8:1)=" + fmt(ratio);
    return decreasing && taus.back() <= taus.front() / 4.0;
}

// ---- criterion 7: Keller-Segel blow-up vs suppression ----------------------

bool c7_ks_contrast(std::string& detail) {
    const double chi = 1.0;
    const double width = 0.1;
    const std::array<double, 3> center{0.5, 0.5, 0.0};
    const int n_sweep = 128, n = 256, n_fine = 512;
    const double T = 1.0;

    BlowupConfig bcfg;
    bcfg.tail_band_lo = 2 * (Grid::make(2, n).dealias_cutoff()) / 3;  // anchor band to n=256

    SolverConfig sc;
    sc.sample_dt = 1e-3;

    // empirical threshold: sweep mass upward at u=0 until detection triggers
    double threshold_mass = 0.0;
    {
        BlowupConfig sweep_cfg = bcfg;
        sweep_cfg.tail_band_lo = 2 * (Grid::make(2, n_sweep).dealias_cutoff()) / 3;
        for (double mass = 10.0; mass <= 120.0; mass *= 1.5) {
            Grid g = Grid::make(2, n_sweep);
            auto rho0 = gaussian_bump(g, mass, width, center);
            auto r = solve_ks(rho0, zero_flow(2), chi, T, sc, sweep_cfg);
            if (r.verdict.status == KSStatus::blowup_suspected) {
                threshold_mass = mass;
                break;
            }
        }
        if (threshold_mass == 0.0) {
            detail = "mass sweep found no blow-up below mass 120";
            return false;
        }
    }
    const double mass = 1.25 * threshold_mass;

    // headline blow-up run and refinement oracle
    Grid g = Grid::make(2, n);
    auto rho0 = gaussian_bump(g, mass, width, center);
    auto coarse = solve_ks(rho0, zero_flow(2), chi, T, sc, bcfg);
    if (coarse.verdict.status != KSStatus::blowup_suspected) {
        detail = "no blow-up detected at n=256 with mass " + fmt(mass);
        return false;
    }
    SolverConfig scf = sc;
    scf.cfl = sc.cfl * 0.5;  // halved dt at doubled resolution
    auto rho0f = gaussian_bump(Grid::make(2, n_fine), mass, width, center);
    auto fine = solve_ks(rho0f, zero_flow(2), chi, T, scf, bcfg);
    const double drift =
        std::abs(fine.verdict.t_detect - coarse.verdict.t_detect) / coarse.verdict.t_detect;
    if (fine.verdict.status != KSStatus::blowup_suspected) {
        detail = "refinement run lost the blow-up verdict";
        return false;
    }

    // suppression with the criterion-6 flow
    auto flow = rescale(cellular2d(8.0), 8, -1);
    auto stirred = solve_ks(rho0, flow, chi, T, sc, bcfg);
    const double growth_cap = 2.0 * stirred.theta0_l2 + 1.0;
    const double decay = stirred.traj.samples.back().l2 / stirred.theta0_l2;

    detail = "m*=" + fmt(threshold_mass) + " m=" + fmt(mass) +
             " t_detect=" + fmt(coarse.verdict.t_detect) + "/" + fmt(fine.verdict.t_detect) +
             " drift=" + fmt(drift) + " peaks=" + fmt(coarse.verdict.peak_linf) + "/" +
             fmt(fine.verdict.peak_linf) + "; flow: " + to_string(stirred.verdict.status) +
             " sup|theta|=" + fmt(stirred.sup_theta_l2) + " cap=" + fmt(growth_cap) +
             " decay=" + fmt(decay);

    return drift <= 0.20 && stirred.verdict.status == KSStatus::suppressed &&
           stirred.sup_theta_l2 <= growth_cap && decay <= 0.1;
}

// ---- criterion 8: quenching contrast ---------------------------------------

bool c8_rd_quench(std::string& detail) {
    const double alpha0 = 0.5;
    const double rate = 400.0;
    const int n = 128;
    auto reaction = ignition_reaction(alpha0, rate);

    Grid g = Grid::make(2, n);
    // hot spot with mean alpha0/2: height 0.95 gaussian, width from the mass
    const double mean0 = alpha0 / 2.0;
    const double width = std::sqrt(mean0 / (0.95 * two_pi));
    auto theta0 = gaussian_bump(g, mean0, width, {0.5, 0.5, 0.0}, "theta");

    SolverConfig sc;
    sc.sample_dt = 2e-3;
    RDConfig rcfg;

    auto still = solve_rd(theta0, zero_flow(2), reaction, 3.0, sc, rcfg);
    if (still.status != RDStatus::burned) {
        detail = std::string("u=0 run did not burn: ") + to_string(still.status) +
                 " (linf end " + fmt(still.traj.samples.back().linf) + ")";
        return false;
    }

    auto flow = rescale(cellular2d(8.0), 8, -1);
    auto stirred = solve_rd(theta0, flow, reaction, 1.0, sc, rcfg);
    if (stirred.status != RDStatus::quenched) {
        detail = std::string("flow run not quenched: ") + to_string(stirred.status);
        return false;
    }

    // post-quench dynamics are exactly linear and relax to the mean
    const double post = 0.3;
    SolverConfig psc;
    psc.sample_dt = post;
    auto rd_cont = solve_rd(stirred.traj.final_state, flow, reaction, post, psc, rcfg);
    auto lin_cont = evolve(stirred.traj.final_state, flow, post, psc);
    const double lin_diff = linf_norm(rd_cont.traj.final_state - lin_cont);
    const double final_dev = linf_norm(rd_cont.traj.final_state - lin_cont) +
                             linf_norm(project_mean_zero(lin_cont));
    const double mean_shift = std::abs(lin_cont.mean() - theta0.mean());

    detail = "burn t=" + fmt(still.t_decided) + "; quench t=" + fmt(stirred.t_decided) +
             "; post linear diff=" + fmt(lin_diff) + "; |theta-mean|_inf=" +
             fmt(linf_norm(project_mean_zero(lin_cont))) + "; mean shift=" + fmt(mean_shift);

    return lin_diff <= 1e-8 && linf_norm(project_mean_zero(lin_cont)) <= 1e-3 &&
           mean_shift <= 0.05 * theta0.mean() && final_dev < 1.0;
}

// ---- criterion 9: chemotaxis pairing identity ------------------------------

bool c9_ks_identity(std::string& detail) {
    Grid g = Grid::make(2, 64);
    const double chi = 1.0, rho_bar = 1.0;
    KSChemotaxis N(g, chi, rho_bar);
    std::vector<cplx> out(g.spectral_size());
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto theta = SpectralField::random_bandlimited(g, 9000 + trial, g.dealias_cutoff());
        N.apply(theta.raw(), out);
        SpectralField Ntheta(g);
        Ntheta.raw() = out;
        const double lhs = inner_product(theta, Ntheta);
        auto phys = theta.to_physical();
        double cube = 0.0, sq = 0.0;
        for (double v : phys) {
            cube += v * v * v;
            sq += v * v;
        }
        cube /= static_cast<double>(phys.size());
        sq /= static_cast<double>(phys.size());
        const double rhs = chi * (0.5 * cube + rho_bar * sq);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    detail = "worst relative mismatch over 20 fields: " + fmt(worst);
    return worst <= 1e-6;
}

// ---- criterion 10: threshold calculators -----------------------------------

bool c10_thresholds(std::string& detail) {
    NonlinearHypotheses hyp;
    hyp.F = [](double y) { return y * y; };
    hyp.G = [](double y) { return y; };
    hyp.C0 = 1.0;
    hyp.eps0 = 0.5;
    const double T0 = threshold_T0(1.0, hyp);
    const double t0_err = std::abs(T0 - 1.0 / 42.0);

    double psi_err = 0.0;
    const double B = 0.5;  // small-B regime for eps0/(8 C0) = 1
    for (int k : {1, 5, 20})
        psi_err = std::max(psi_err,
                           std::abs(psi_envelope(B, k, 8.0, 1.0) - B * std::pow(15.0 / 16.0, k)));
    detail = "T0=" + fmt(T0) + " (err " + fmt(t0_err) + "), psi geometric err=" + fmt(psi_err);
    return t0_err <= 1e-8 && psi_err <= 1e-14;
}

// ---- criterion 11: module invariant battery --------------------------------

bool c11_invariants(std::string& detail) {
    std::string fails;

    {  // mass / mean conservation (linear + KS)
        Grid g = Grid::make(2, 64);
        auto f = SpectralField::random_bandlimited(g, 5, 12);
        f.coeffs()[0] = 0.7;
        auto ev = evolve(f, cellular2d(3.0), 0.05);
        if (std::abs(ev.mean() - 0.7) > 1e-12) fails += " mean-conservation";

        auto rho0 = gaussian_bump(g, 2.0, 0.1, {0.5, 0.5, 0.0});
        auto ks = solve_ks(rho0, rescale(cellular2d(2.0), 2, -1), 1.0, 0.05, {});
        if (std::abs((ks.rho_bar + ks.traj.samples.back().mean) - 2.0) > 1e-8 * 2.0)
            fails += " ks-mass";
    }
    {  // energy identity: L2 drop balances the H1 dissipation
        Grid g = Grid::make(2, 64);
        auto u = cellular2d(20.0);
        SolverConfig cfg;
        Integrator integ(g, u, cfg);
        auto phi = SpectralField::random_bandlimited(g, 9, g.dealias_cutoff());
        integ.project_band(phi.raw());
        integ.set_dt(0.25 * g.spacing() / u.sup_norm());
        double prev2 = l2_norm(phi) * l2_norm(phi), prevh = h1_seminorm(phi);
        for (int s = 0; s < 10; ++s) {
            integ.step(phi.raw());
            const double cur2 = l2_norm(phi) * l2_norm(phi), curh = h1_seminorm(phi);
            const double drop = prev2 - cur2;
            const double dissip = integ.dt() * (prevh * prevh + curh * curh);
            if (drop <= 0 || std::abs(drop - dissip) > 0.05 * drop) {
                fails += " energy-identity";
                break;
            }
            prev2 = cur2;
            prevh = curh;
        }
    }
    {  // adjointness
        Grid g = Grid::make(2, 32);
        auto u = cellular2d(4.0);
        auto f = SpectralField::random_bandlimited(g, 31, g.dealias_cutoff());
        auto h = SpectralField::random_bandlimited(g, 32, g.dealias_cutoff());
        auto Sf = evolve(f, u, 0.03);
        auto Sh = evolve(h, rescale(u, 1, -1), 0.03);
        if (std::abs(inner_product(Sf, h) - inner_product(f, Sh)) >
            1e-6 * std::abs(inner_product(Sf, h)))
            fails += " adjointness";
    }
    {  // range preservation for the ignition model
        Grid g = Grid::make(2, 64);
        auto theta0 = gaussian_bump(g, 0.25, 0.2, {0.5, 0.5, 0.0}, "theta");
        auto rd = solve_rd(theta0, cellular2d(3.0), ignition_reaction(0.5, 100.0), 0.1, {});
        if (rd.status == RDStatus::aborted || rd.range_min < -1e-6 ||
            rd.range_max > 1.0 + 1e-6)
            fails += " range-preservation";
    }
    {  // occupancy uniformization trend
        auto v = rescale(cellular2d(4.0), 4, -1);
        auto early = cell_occupancy(v, 0.05, 2, 20000, 61);
        auto late = cell_occupancy(v, 0.2, 2, 20000, 61);
        if (!(late.max_dev < early.max_dev)) fails += " occupancy-trend";
    }

    detail = fails.empty() ? "mass/mean, energy, adjointness, range, occupancy all hold"
                           : ("failed:" + fails);
    return fails.empty();
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<Check> checks = {
        {1, "heat-only dissipation time ln2/(4pi^2) within 1e-4", c1_heat_tau},
        {2, "propagator norm: power iteration vs dense SVD to 1e-6", c2_norm_oracle},
        {3, "Taylor dispersion: MC within 5%, cell problem to 1e-8", c3_taylor},
        {4, "rescale invariance of D within combined 3-sigma", c4_rescale_invariance},
        {5, "cellular D(A) log-log slope in [0.4, 0.6]", c5_cellular_scaling},
        {6, "dissipation-time collapse along the rescaled family", c6_tau_collapse},
        {7, "Keller-Segel blow-up vs suppression contrast", c7_ks_contrast},
        {8, "ignition quenching contrast with linear aftermath", c8_rd_quench},
        {9, "chemotaxis pairing identity on 20 random fields", c9_ks_identity},
        {10, "threshold calculators T0 = 1/42 and geometric Psi", c10_thresholds},
        {11, "module invariant battery", c11_invariants},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (auto& c : checks) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s — %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
