#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "stirlab/advection_diffusion.hpp"
#include "stirlab/cell_problem.hpp"
#include "stirlab/csv.hpp"
#include "stirlab/experiment.hpp"
#include "stirlab/keller_segel.hpp"
#include "stirlab/reaction_diffusion.hpp"
#include "stirlab/sde.hpp"
#include "stirlab/snapshot.hpp"
#include "stirlab/thresholds.hpp"

using namespace stirlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string out = ".";
    int threads = 1;
};

void emit_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

int run_config_experiment(const std::string& path, const GlobalOpts& g,
                          const std::string& expected_prefix) {
    json cfg = load_config_file(path);
    validate_config(cfg);
    const std::string kind = cfg.at("experiment").get<std::string>();
    if (!expected_prefix.empty() && kind.rfind(expected_prefix, 0) != 0 && kind != "custom")
        throw SchemaError("expected a '" + expected_prefix + "*' or custom experiment, got '" +
                          kind + "'");
    std::string out = cfg.value("out", g.out);
    int threads = cfg.value("threads", g.threads);
    if (kind == "sweep")
        run_sweep(cfg, out, threads);
    else
        run_experiment(cfg, out, threads);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stirlab: stirred scalar dynamics on the torus"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global RNG seed");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--threads", g.threads, "worker threads");

    // simulate-ad
    auto* ad = app.add_subcommand("simulate-ad", "advection-diffusion run with diagnostics");
    std::string ad_flow = "zero", ad_out_csv;
    int ad_n = 64;
    double ad_t = 0.1, ad_sample = 0.0;
    std::uint64_t ad_init_seed = 7;
    ad->add_option("--flow", ad_flow, "flow spec, e.g. cellular2d:A=5,nu=2,sign=-1");
    ad->add_option("--n", ad_n, "grid points per dimension");
    ad->add_option("--t", ad_t, "horizon");
    ad->add_option("--sample-dt", ad_sample, "diagnostic cadence");
    ad->add_option("--init-seed", ad_init_seed, "random band-limited initial data seed");
    ad->add_option("--csv", ad_out_csv, "diagnostics CSV path (default stdout)");

    // dissipation-time
    auto* dt_cmd = app.add_subcommand("dissipation-time", "measure tau_*(u)");
    std::string dt_flow = "cellular2d:A=1";
    int dt_n = 64;
    double dt_tol = 1e-3, dt_tmax = 10.0, dt_norm_tol = 1e-6;
    dt_cmd->add_option("--flow", dt_flow, "flow spec");
    dt_cmd->add_option("--n", dt_n, "grid points per dimension");
    dt_cmd->add_option("--tol", dt_tol, "relative bracket width");
    dt_cmd->add_option("--tmax", dt_tmax, "bracketing budget");
    dt_cmd->add_option("--norm-tol", dt_norm_tol, "power iteration tolerance");

    // propagator-norm
    auto* pn = app.add_subcommand("propagator-norm", "L2 operator norm of S_t on mean-zero data");
    std::string pn_flow = "zero";
    int pn_n = 64;
    double pn_t = 0.02, pn_tol = 1e-6;
    pn->add_option("--flow", pn_flow, "flow spec");
    pn->add_option("--n", pn_n, "grid points per dimension");
    pn->add_option("--t", pn_t, "time");
    pn->add_option("--tol", pn_tol, "power iteration tolerance");

    // diffusivity
    auto* dif = app.add_subcommand("diffusivity", "Monte Carlo effective diffusivity");
    std::string dif_flow = "shear2d:A=4";
    int dif_M = 10000;
    double dif_T = 20.0, dif_dt = 0.0;
    dif->add_option("--flow", dif_flow, "flow spec");
    dif->add_option("--M", dif_M, "paths");
    dif->add_option("--T", dif_T, "horizon");
    dif->add_option("--dt", dif_dt, "Euler-Maruyama step (0 = half the bound)");

    // occupancy
    auto* occ = app.add_subcommand("occupancy", "cell-occupancy histogram of X_tau");
    std::string occ_flow = "cellular2d:A=4,nu=4";
    int occ_mu = 2, occ_M = 20000;
    double occ_tau = 0.5, occ_dt = 0.0;
    occ->add_option("--flow", occ_flow, "flow spec");
    occ->add_option("--mu", occ_mu, "cells per side of the histogram");
    occ->add_option("--tau", occ_tau, "time");
    occ->add_option("--M", occ_M, "paths");
    occ->add_option("--dt", occ_dt, "step (0 = half the bound)");

    // thresholds
    auto* th = app.add_subcommand("thresholds", "T0/T1/Psi-envelope calculators");
    std::string th_model = "ks";
    double th_chi = 1.0, th_rhobar = 1.0, th_B = 1.0, th_c1 = 1.0, th_c4 = 1.0;
    int th_d = 2, th_psi_steps = 0;
    th->add_option("--model", th_model, "ks (chemotaxis hypotheses)");
    th->add_option("--chi", th_chi, "sensitivity");
    th->add_option("--rhobar", th_rhobar, "mean density");
    th->add_option("--B", th_B, "initial L2 norm");
    th->add_option("--d", th_d, "dimension");
    th->add_option("--c1", th_c1, "Gagliardo-Nirenberg constant");
    th->add_option("--c4", th_c4, "Riesz-transform constant");
    th->add_option("--psi-steps", th_psi_steps, "also print Psi^n envelope rows");

    // config-driven runs
    auto* ks = app.add_subcommand("ks", "Keller-Segel runs");
    auto* ks_run = ks->add_subcommand("run", "run a ks experiment config");
    std::string ks_cfg;
    ks_run->add_option("--config", ks_cfg, "config file")->required();

    auto* rd = app.add_subcommand("rd", "reaction-diffusion runs");
    auto* rd_run = rd->add_subcommand("run", "run an rd experiment config");
    std::string rd_cfg;
    rd_run->add_option("--config", rd_cfg, "config file")->required();

    auto* exp = app.add_subcommand("experiment", "run any experiment config");
    std::string exp_cfg;
    exp->add_option("--config", exp_cfg, "config file")->required();

    auto* sw = app.add_subcommand("sweep", "cartesian parameter sweep");
    std::string sw_cfg;
    sw->add_option("--config", sw_cfg, "sweep config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ad->parsed()) {
            auto flow = flow_from_string(ad_flow);
            Grid grid = Grid::make(flow.dim(), ad_n);
            auto init = SpectralField::random_bandlimited(grid, ad_init_seed,
                                                          grid.dealias_cutoff() / 2);
            SolverConfig sc;
            sc.sample_dt = ad_sample > 0 ? ad_sample : ad_t / 100.0;
            auto traj = solve_nonlinear(init, flow, nullptr, ad_t, sc);
            std::ostream* os = &std::cout;
            std::ofstream file;
            if (!ad_out_csv.empty()) {
                file.open(ad_out_csv);
                os = &file;
            }
            emit_row(*os, {"t", "l2", "h1", "linf", "min", "max", "mean", "tail_fraction"});
            for (const auto& d : traj.samples)
                emit_row(*os, {CsvWriter::format(d.t), CsvWriter::format(d.l2),
                               CsvWriter::format(d.h1), CsvWriter::format(d.linf),
                               CsvWriter::format(d.vmin), CsvWriter::format(d.vmax),
                               CsvWriter::format(d.mean), CsvWriter::format(d.tail)});
            if (traj.aborted) throw NumericalError(traj.abort_reason);
        } else if (dt_cmd->parsed()) {
            auto flow = flow_from_string(dt_flow);
            Grid grid = Grid::make(flow.dim(), dt_n);
            auto est = dissipation_time(flow, grid, dt_tol, {}, dt_tmax, dt_norm_tol);
            if (!est.ok) throw NumericalError("dissipation-time: " + est.message);
            emit_row(std::cout, {"flow", "n", "tau_star", "t_lo", "t_hi", "norm_at_tau", "tol"});
            emit_row(std::cout, {dt_flow, std::to_string(dt_n), CsvWriter::format(est.tau_star),
                                 CsvWriter::format(est.t_lo), CsvWriter::format(est.t_hi),
                                 CsvWriter::format(est.norm_at_tau), CsvWriter::format(est.tol)});
        } else if (pn->parsed()) {
            auto flow = flow_from_string(pn_flow);
            Grid grid = Grid::make(flow.dim(), pn_n);
            auto est = propagator_norm_L2(flow, grid, pn_t, pn_tol, {}, g.seed);
            if (!est.converged)
                throw NumericalError("propagator-norm: no convergence; last value " +
                                     CsvWriter::format(est.value));
            emit_row(std::cout, {"flow", "n", "t", "norm", "iterations"});
            emit_row(std::cout, {pn_flow, std::to_string(pn_n), CsvWriter::format(pn_t),
                                 CsvWriter::format(est.value), std::to_string(est.iterations)});
        } else if (dif->parsed()) {
            auto flow = flow_from_string(dif_flow);
            SdeConfig sc;
            sc.M = dif_M;
            sc.T = dif_T;
            sc.dt = dif_dt;
            sc.seed = g.seed;
            sc.threads = g.threads;
            auto est = estimate_D(flow, sc);
            emit_row(std::cout,
                     {"direction", "D_hat", "stderr", "D_half_horizon", "M", "T", "dt"});
            for (std::size_t j = 0; j < est.per_direction.size(); ++j) {
                const auto& d = est.per_direction[j];
                emit_row(std::cout, {"e" + std::to_string(j + 1), CsvWriter::format(d.D_hat),
                                     CsvWriter::format(d.stderr_), CsvWriter::format(d.D_mid),
                                     std::to_string(d.M), CsvWriter::format(d.T),
                                     CsvWriter::format(d.dt)});
            }
        } else if (occ->parsed()) {
            auto flow = flow_from_string(occ_flow);
            auto res = cell_occupancy(flow, occ_tau, occ_mu, occ_M, g.seed, occ_dt, g.threads);
            emit_row(std::cout, {"cell", "frequency", "uniform", "max_deviation", "band_3sigma"});
            const double p = 1.0 / static_cast<double>(res.freq.size());
            for (std::size_t c = 0; c < res.freq.size(); ++c)
                emit_row(std::cout, {std::to_string(c), CsvWriter::format(res.freq[c]),
                                     CsvWriter::format(p), CsvWriter::format(res.max_dev),
                                     CsvWriter::format(res.binom_band)});
        } else if (th->parsed()) {
            if (th_model != "ks") throw SchemaError("thresholds: unknown model " + th_model);
            auto hyp = ks_hypotheses(th_chi, th_rhobar, th_d, th_c1, th_c4);
            const double T0 = threshold_T0(th_B, hyp);
            const double T1 = threshold_T1(th_B, hyp);
            emit_row(std::cout, {"model", "chi", "rhobar", "B", "d", "T0", "T1"});
            emit_row(std::cout, {th_model, CsvWriter::format(th_chi),
                                 CsvWriter::format(th_rhobar), CsvWriter::format(th_B),
                                 std::to_string(th_d), CsvWriter::format(T0),
                                 CsvWriter::format(T1)});
            if (th_psi_steps > 0) {
                emit_row(std::cout, {"n", "psi_n"});
                for (int k = 0; k <= th_psi_steps; ++k)
                    emit_row(std::cout, {std::to_string(k),
                                         CsvWriter::format(psi_envelope(th_B, k, hyp.eps0, hyp.C0))});
            }
        } else if (ks_run->parsed()) {
            return run_config_experiment(ks_cfg, g, "ks-");
        } else if (rd_run->parsed()) {
            return run_config_experiment(rd_cfg, g, "rd-");
        } else if (exp->parsed()) {
            return run_config_experiment(exp_cfg, g, "");
        } else if (sw->parsed()) {
            json cfg = load_config_file(sw_cfg);
            validate_config(cfg);
            if (cfg.at("experiment").get<std::string>() != "sweep")
                throw SchemaError("sweep: config must have experiment=sweep");
            run_sweep(cfg, cfg.value("out", g.out), cfg.value("threads", g.threads));
            std::cout << "wrote " << cfg.value("out", g.out) << "\n";
        }
    } catch (const SchemaError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
