#include "stirlab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "stirlab/advection_diffusion.hpp"
#include "stirlab/cell_problem.hpp"
#include "stirlab/csv.hpp"
#include "stirlab/keller_segel.hpp"
#include "stirlab/math_util.hpp"
#include "stirlab/parallel.hpp"
#include "stirlab/reaction_diffusion.hpp"
#include "stirlab/rng.hpp"
#include "stirlab/sde.hpp"
#include "stirlab/snapshot.hpp"

namespace stirlab {

namespace fs = std::filesystem;

namespace {

void write_diag_csv(const std::string& path, const Trajectory& traj) {
    CsvWriter csv(path, {"t", "l2", "h1", "linf", "min", "max", "mean", "tail_fraction"});
    for (const auto& d : traj.samples)
        csv.row(d.t, d.l2, d.h1, d.linf, d.vmin, d.vmax, d.mean, d.tail);
}

std::array<double, 3> center_from(const json& bump) {
    std::array<double, 3> c{0.5, 0.5, 0.5};
    if (bump.contains("center")) {
        auto arr = bump["center"];
        for (std::size_t j = 0; j < arr.size() && j < 3; ++j) c[j] = arr[j].get<double>();
    }
    return c;
}

SolverConfig solver_config_from(const json& cfg, double T) {
    SolverConfig sc;
    sc.cfl = cfg.value("cfl", 0.5);
    sc.sample_dt = cfg.value("sample_dt", T / 200.0);
    if (cfg.contains("snapshot_times"))
        for (const auto& t : cfg["snapshot_times"]) sc.snapshot_times.push_back(t.get<double>());
    return sc;
}

void run_tau_vs_nu(const json& cfg, const std::string& out, int threads,
                   std::map<std::string, double>& summary) {
    const int n = cfg.at("n").get<int>();
    const double tol = cfg.value("tol", 1e-3);
    const double norm_tol = cfg.value("norm_tol", 1e-6);
    const bool with_D = cfg.value("with_diffusivity", false);
    std::vector<int> nus;
    for (const auto& v : cfg.at("nu_list")) nus.push_back(v.get<int>());

    struct Row {
        int nu = 0;
        DissipationEstimate est;
        double D = 0.0;
    };
    std::vector<Row> rows(nus.size());

    parallel_for(nus.size(), threads, [&](std::size_t i) {
        const int nu = nus[i];
        Grid g = Grid::make(2, n);
        auto flow = rescale(cellular2d(static_cast<double>(nu)), nu, -1);
        SolverConfig sc;
        sc.cfl = cfg.value("cfl", 0.5);
        rows[i].nu = nu;
        rows[i].est = dissipation_time(flow, g, tol, sc, 10.0, norm_tol);
        if (with_D) {
            Grid gc = Grid::make(2, 128);
            rows[i].D = cell_problem_D_e(cellular2d(static_cast<double>(nu)), {1, 0, 0}, gc).D_e;
        }
    });

    CsvWriter csv(out + "/tau_vs_nu.csv",
                  {"nu", "A", "n", "tau_star", "t_lo", "t_hi", "norm_at_tau", "D_base_e1"});
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!r.est.ok) throw NumericalError("tau-vs-nu: " + r.est.message);
        csv.row(r.nu, r.nu, n, r.est.tau_star, r.est.t_lo, r.est.t_hi, r.est.norm_at_tau, r.D);
        summary["tau_nu_" + std::to_string(r.nu)] = r.est.tau_star;
        if (i > 0 && rows[i].est.tau_star >= rows[i - 1].est.tau_star) decreasing = false;
    }
    summary["strictly_decreasing"] = decreasing ? 1.0 : 0.0;
    summary["ratio_last_first"] = rows.back().est.tau_star / rows.front().est.tau_star;
}

void run_D_vs_A(const json& cfg, const std::string& out, int threads,
                std::map<std::string, double>& summary) {
    std::vector<double> As;
    for (const auto& v : cfg.at("A_list")) As.push_back(v.get<double>());
    std::vector<int> ns;
    if (cfg.contains("n_list")) {
        for (const auto& v : cfg["n_list"]) ns.push_back(v.get<int>());
        if (ns.size() != As.size()) throw SchemaError("D-vs-A: n_list size != A_list size");
    } else {
        ns.assign(As.size(), cfg.at("n").get<int>());
    }
    const std::string method = cfg.value("method", "cell");
    const double tol = cfg.value("tol", 1e-8);
    const std::uint64_t seed = cfg.value("seed", 1);

    struct Row {
        double A = 0, D1 = 0, D2 = 0, res = 0, Dmc = 0, mc_err = 0;
        int iters = 0, n = 0;
    };
    std::vector<Row> rows(As.size());

    parallel_for(As.size(), threads, [&](std::size_t i) {
        Row& r = rows[i];
        r.A = As[i];
        r.n = ns[i];
        auto flow = cellular2d(As[i]);
        if (method != "mc") {
            Grid g = Grid::make(2, ns[i]);
            auto c1 = cell_problem_D_e(flow, {1, 0, 0}, g, tol);
            auto c2 = cell_problem_D_e(flow, {0, 1, 0}, g, tol);
            if (!c1.converged || !c2.converged)
                throw NumericalError("D-vs-A: corrector solve did not converge at A=" +
                                     std::to_string(As[i]));
            r.D1 = c1.D_e;
            r.D2 = c2.D_e;
            r.res = std::max(c1.residual, c2.residual);
            r.iters = std::max(c1.iterations, c2.iterations);
        }
        if (method == "mc" || method == "both") {
            SdeConfig sc;
            sc.M = cfg["mc"].at("M").get<int>();
            sc.T = cfg["mc"].at("T").get<double>();
            sc.dt = cfg["mc"].value("dt", 0.0);
            sc.seed = split_seed(seed, i);
            auto est = estimate_D(flow, sc);
            r.Dmc = est.D;
            double err = 0;
            for (const auto& d : est.per_direction) err = std::max(err, d.stderr_);
            r.mc_err = err;
        }
    });

    CsvWriter csv(out + "/d_vs_a.csv",
                  {"A", "n", "D_cell_e1", "D_cell_e2", "D_cell_min", "residual", "iterations",
                   "D_mc", "mc_stderr", "log_A", "log_D"});
    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        const double Dmin = method == "mc" ? r.Dmc : std::min(r.D1, r.D2);
        csv.row(r.A, r.n, r.D1, r.D2, std::min(r.D1, r.D2), r.res, r.iters, r.Dmc, r.mc_err,
                std::log(r.A), std::log(Dmin));
        lx.push_back(std::log(r.A));
        ly.push_back(std::log(Dmin));
        summary["D_A_" + CsvWriter::format(r.A)] = Dmin;
    }
    if (rows.size() >= 2) summary["slope"] = linear_fit(lx, ly).first;
}

void run_ks_suppression(const json& cfg, const std::string& out, int threads,
                        std::map<std::string, double>& summary) {
    const double chi = cfg.at("chi").get<double>();
    const int n = cfg.at("n").get<int>();
    const double T = cfg.at("T").get<double>();
    const auto& bump = cfg.at("bump");
    const double width = bump.at("width").get<double>();
    const auto center = center_from(bump);
    auto flow = flow_from_json(cfg.at("flow"));

    BlowupConfig bcfg;
    bcfg.peak_factor = cfg.value("peak_factor", 10.0);
    bcfg.tail_threshold = cfg.value("tail_threshold", 1e-2);
    bcfg.suppress_factor = cfg.value("suppress_factor", 0.1);

    SolverConfig sc = solver_config_from(cfg, T);

    // optional upward mass sweep at u=0 locates the empirical threshold
    if (cfg.contains("mass_sweep")) {
        CsvWriter sweep_csv(out + "/mass_sweep.csv",
                            {"mass", "verdict", "t_detect", "peak_linf", "tail"});
        for (const auto& mv : cfg["mass_sweep"]) {
            const double m = mv.get<double>();
            Grid g = Grid::make(2, n);
            auto rho0 = gaussian_bump(g, m, width, center);
            auto r = solve_ks(rho0, zero_flow(2), chi, T, sc, bcfg);
            sweep_csv.row(m, to_string(r.verdict.status), r.verdict.t_detect,
                          r.verdict.peak_linf, r.verdict.tail_at_detect);
            if (r.verdict.status == KSStatus::blowup_suspected &&
                !summary.count("threshold_mass"))
                summary["threshold_mass"] = m;
        }
    }

    const double mass = bump.at("mass").get<double>();
    Grid g = Grid::make(2, n);
    auto rho0 = gaussian_bump(g, mass, width, center);
    summary["mass"] = mass;

    auto still = solve_ks(rho0, zero_flow(2), chi, T, sc, bcfg);
    write_diag_csv(out + "/diag_nodrift.csv", still.traj);
    summary["blowup_nodrift"] = still.verdict.status == KSStatus::blowup_suspected ? 1 : 0;
    summary["t_detect"] = still.verdict.t_detect;
    summary["peak_linf"] = still.verdict.peak_linf;

    if (cfg.contains("n_refine")) {
        const int n2 = cfg["n_refine"].get<int>();
        Grid g2 = Grid::make(2, n2);
        auto rho0f = gaussian_bump(g2, mass, width, center);
        SolverConfig sc2 = sc;
        sc2.cfl = sc.cfl * 0.5;  // refinement oracle: doubled n, halved dt
        auto fine = solve_ks(rho0f, zero_flow(2), chi, T, sc2, bcfg);
        write_diag_csv(out + "/diag_nodrift_refined.csv", fine.traj);
        summary["blowup_refined"] = fine.verdict.status == KSStatus::blowup_suspected ? 1 : 0;
        summary["t_detect_refined"] = fine.verdict.t_detect;
        summary["peak_refined"] = fine.verdict.peak_linf;
        if (still.verdict.t_detect > 0)
            summary["t_detect_drift"] =
                std::abs(fine.verdict.t_detect - still.verdict.t_detect) /
                still.verdict.t_detect;
    }

    auto stirred = solve_ks(rho0, flow, chi, T, sc, bcfg);
    write_diag_csv(out + "/diag_flow.csv", stirred.traj);
    summary["suppressed_flow"] = stirred.verdict.status == KSStatus::suppressed ? 1 : 0;
    summary["sup_theta_l2"] = stirred.sup_theta_l2;
    summary["growth_bound"] = 2.0 * stirred.theta0_l2 + 1.0;
    summary["theta0_l2"] = stirred.theta0_l2;
    summary["decay_ratio"] = stirred.traj.samples.back().l2 / stirred.theta0_l2;

    CsvWriter verdicts(out + "/verdicts.csv",
                       {"run", "verdict", "t_detect", "peak_linf", "tail"});
    verdicts.row("nodrift", to_string(still.verdict.status), still.verdict.t_detect,
                 still.verdict.peak_linf, still.verdict.tail_at_detect);
    verdicts.row("flow", to_string(stirred.verdict.status), stirred.verdict.t_detect,
                 stirred.verdict.peak_linf, stirred.verdict.tail_at_detect);

    for (const auto& [t, field] : stirred.traj.snapshots) {
        char name[64];
        std::snprintf(name, sizeof(name), "/snapshot_flow_t%.6f.tsl1", t);
        write_tsl1(out + name, field, t);
    }
    (void)threads;
}

void run_rd_quench(const json& cfg, const std::string& out, int threads,
                   std::map<std::string, double>& summary) {
    const auto& rj = cfg.at("reaction");
    auto reaction = ignition_reaction(rj.at("alpha0").get<double>(), rj.value("rate", 1.0));
    const int n = cfg.at("n").get<int>();
    const double T = cfg.at("T").get<double>();
    const auto& bump = cfg.at("bump");
    auto flow = flow_from_json(cfg.at("flow"));

    Grid g = Grid::make(2, n);
    auto theta0 = gaussian_bump(g, bump.at("mass").get<double>(), bump.at("width").get<double>(),
                                center_from(bump), "theta");

    RDConfig rcfg;
    rcfg.burn_tol = cfg.value("burn_tol", 1e-3);
    rcfg.range_tol = cfg.value("range_tol", 1e-6);
    SolverConfig sc = solver_config_from(cfg, T);

    summary["lambda"] = reaction.lambda;
    summary["theta0_mean"] = theta0.mean();
    if (theta0.mean() < reaction.alpha0) {
        auto q = quench_schedule(reaction.alpha0, theta0.mean(), reaction.lambda);
        summary["t0_schedule"] = q.t0;
        summary["eps_schedule"] = q.eps;
        summary["tau_required"] = required_tau_for_quench(q.t0, q.eps, 2);
    }

    auto still = solve_rd(theta0, zero_flow(2), reaction, T, sc, rcfg);
    write_diag_csv(out + "/diag_nodrift.csv", still.traj);
    summary["burned_nodrift"] = still.status == RDStatus::burned ? 1 : 0;
    summary["t_burn"] = still.t_decided;

    auto stirred = solve_rd(theta0, flow, reaction, T, sc, rcfg);
    write_diag_csv(out + "/diag_flow.csv", stirred.traj);
    summary["quenched_flow"] = stirred.status == RDStatus::quenched ? 1 : 0;
    summary["t_quench"] = stirred.t_decided;

    if (stirred.status == RDStatus::quenched && cfg.value("post_horizon", 0.0) > 0.0) {
        const double post = cfg["post_horizon"].get<double>();
        SolverConfig psc;
        psc.cfl = sc.cfl;
        auto rd_cont = solve_rd(stirred.traj.final_state, flow, reaction, post, psc, rcfg);
        auto lin_cont = evolve(stirred.traj.final_state, flow, post, psc);
        summary["post_linear_diff"] = linf_norm(rd_cont.traj.final_state - lin_cont);
        SpectralField dev = project_mean_zero(rd_cont.traj.final_state);
        summary["final_dev_from_mean"] = linf_norm(dev);
    }

    CsvWriter verdicts(out + "/verdicts.csv", {"run", "verdict", "t_decided"});
    verdicts.row("nodrift", to_string(still.status), still.t_decided);
    verdicts.row("flow", to_string(stirred.status), stirred.t_decided);
    (void)threads;
}

void run_occupancy(const json& cfg, const std::string& out, int threads,
                   std::map<std::string, double>& summary) {
    auto flow = flow_from_json(cfg.at("flow"));
    const int mu = cfg.at("mu").get<int>();
    const int M = cfg.at("M").get<int>();
    const double dt = cfg.value("dt", 0.0);
    const std::uint64_t seed = cfg.value("seed", 1);

    std::vector<double> taus;
    for (const auto& v : cfg.at("tau_list")) taus.push_back(v.get<double>());
    std::vector<OccupancyResult> results(taus.size());
    parallel_for(taus.size(), threads, [&](std::size_t i) {
        results[i] = cell_occupancy(flow, taus[i], mu, M, seed, dt, 1);
    });

    CsvWriter csv(out + "/occupancy.csv", {"tau", "mu", "M", "max_deviation", "binomial_band"});
    CsvWriter hist(out + "/occupancy_hist.csv", {"tau", "cell", "frequency"});
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        csv.row(r.tau, r.mu, r.M, r.max_dev, r.binom_band);
        summary["max_dev_" + std::to_string(i)] = r.max_dev;
        for (std::size_t c = 0; c < r.freq.size(); ++c) hist.row(r.tau, c, r.freq[c]);
    }
}

void run_custom(const json& cfg, const std::string& out, int threads,
                std::map<std::string, double>& summary) {
    const std::string model = cfg.at("model").get<std::string>();
    const int n = cfg.at("n").get<int>();
    const double T = cfg.at("T").get<double>();
    auto flow = flow_from_json(cfg.at("flow"));
    Grid g = Grid::make(flow.dim(), n);
    SolverConfig sc = solver_config_from(cfg, T);
    sc.dt = cfg.value("dt", 0.0);

    SpectralField init;
    if (cfg.contains("bump"))
        init = gaussian_bump(g, cfg["bump"].at("mass").get<double>(),
                             cfg["bump"].at("width").get<double>(), center_from(cfg["bump"]));
    else
        init = SpectralField::random_bandlimited(g, cfg.value("init_seed", 7),
                                                 g.dealias_cutoff() / 2);

    Trajectory traj;
    if (model == "ad") {
        traj = solve_nonlinear(init, flow, nullptr, T, sc);
    } else if (model == "ks") {
        auto r = solve_ks(init, flow, cfg.value("chi", 1.0), T, sc);
        traj = std::move(r.traj);
        summary["verdict_blowup"] = r.verdict.status == KSStatus::blowup_suspected ? 1 : 0;
        summary["t_detect"] = r.verdict.t_detect;
    } else {
        auto reaction = ignition_reaction(cfg.at("reaction").at("alpha0").get<double>(),
                                          cfg.at("reaction").value("rate", 1.0));
        auto r = solve_rd(init, flow, reaction, T, sc);
        traj = std::move(r.traj);
        summary["quenched"] = r.status == RDStatus::quenched ? 1 : 0;
        summary["t_decided"] = r.t_decided;
    }
    write_diag_csv(out + "/diag.csv", traj);
    summary["final_l2"] = traj.samples.back().l2;
    for (const auto& [t, field] : traj.snapshots) {
        char name[64];
        std::snprintf(name, sizeof(name), "/snapshot_t%.6f.tsl1", t);
        write_tsl1(out + name, field, t);
    }
    (void)threads;
}

json set_by_path(json cfg, const std::string& dotted, const json& value) {
    std::string ptr = "/" + dotted;
    for (auto& c : ptr)
        if (c == '.') c = '/';
    cfg[json::json_pointer(ptr)] = value;
    return cfg;
}

}  // namespace

ExperimentRecord run_experiment(const json& cfg, const std::string& out_dir, int threads) {
    validate_config(cfg);
    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentRecord rec;
    rec.out_dir = out_dir;
    const std::string kind = cfg.at("experiment").get<std::string>();

    if (kind == "tau-vs-nu") run_tau_vs_nu(cfg, out_dir, threads, rec.summary);
    else if (kind == "D-vs-A") run_D_vs_A(cfg, out_dir, threads, rec.summary);
    else if (kind == "ks-suppression") run_ks_suppression(cfg, out_dir, threads, rec.summary);
    else if (kind == "rd-quench") run_rd_quench(cfg, out_dir, threads, rec.summary);
    else if (kind == "occupancy") run_occupancy(cfg, out_dir, threads, rec.summary);
    else if (kind == "custom") run_custom(cfg, out_dir, threads, rec.summary);
    else if (kind == "sweep") throw SchemaError("use run_sweep for sweep configs");

    const auto t1 = std::chrono::steady_clock::now();

    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    rec.record["config"] = cfg;
    rec.record["config_hash"] = hash_hex;
    rec.record["version"] = version_string();
    rec.record["wall_clock_s"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0;
    rec.record["summary"] = rec.summary;

    std::ofstream(out_dir + "/record.json") << rec.record.dump(2) << "\n";
    CsvWriter sum(out_dir + "/summary.csv", {"key", "value"});
    for (const auto& [k, v] : rec.summary) sum.row(k, v);
    return rec;
}

std::vector<ExperimentRecord> run_sweep(const json& cfg, const std::string& out_dir,
                                        int threads) {
    validate_config(cfg);
    fs::create_directories(out_dir);
    const json& base = cfg.at("base");
    const json& sweep = cfg.at("sweep");

    // cartesian product in sorted-key order
    std::vector<std::string> keys;
    for (auto it = sweep.begin(); it != sweep.end(); ++it) keys.push_back(it.key());
    std::vector<json> jobs{base};
    for (const auto& key : keys) {
        std::vector<json> next;
        for (const auto& job : jobs)
            for (const auto& value : sweep.at(key)) next.push_back(set_by_path(job, key, value));
        jobs = std::move(next);
    }
    if (sweep.empty()) jobs.clear();

    for (std::size_t i = 0; i < jobs.size(); ++i)
        if (!jobs[i].contains("seed"))
            jobs[i]["seed"] = static_cast<std::int64_t>(config_hash(jobs[i]) & 0x7fffffffULL);

    std::vector<ExperimentRecord> records(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        char sub[32];
        std::snprintf(sub, sizeof(sub), "/job_%04zu", i);
        try {
            records[i] = run_experiment(jobs[i], out_dir + sub, 1);
        } catch (const std::exception& e) {
            errors[i] = e.what();  // partial failures recorded, sweep continues
        }
    });

    std::vector<std::string> metric_keys;
    {
        std::set<std::string> mk;
        for (const auto& r : records)
            for (const auto& [k, v] : r.summary) mk.insert(k);
        metric_keys.assign(mk.begin(), mk.end());
    }
    std::vector<std::string> header{"job"};
    for (const auto& k : keys) header.push_back(k);
    header.push_back("error");
    for (const auto& k : metric_keys) header.push_back(k);

    CsvWriter merged(out_dir + "/merged.csv", header);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::vector<std::string> cells{std::to_string(i)};
        for (const auto& k : keys) {
            std::string ptr = "/" + k;
            for (auto& c : ptr)
                if (c == '.') c = '/';
            cells.push_back(jobs[i].at(json::json_pointer(ptr)).dump());
        }
        cells.push_back(errors[i]);
        for (const auto& k : metric_keys) {
            auto it = records[i].summary.find(k);
            cells.push_back(it == records[i].summary.end() ? ""
                                                           : CsvWriter::format(it->second));
        }
        merged.write_row(cells);
    }
    return records;
}

}  // namespace stirlab
