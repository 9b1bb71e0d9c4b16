#include "hwlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hwlab/field_io.hpp"

namespace hwlab {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

FILE* open_csv(const fs::path& p) {
    FILE* f = std::fopen(p.string().c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + p.string());
    return f;
}

ordered_json report_json(const FunctionalReport& r) {
    ordered_json j;
    j["mass_sq"] = r.mass_sq;
    j["kinetic"] = r.kinetic;
    j["lq"] = r.lq;
    j["lp"] = r.lp;
    j["energy"] = r.energy;
    j["pohozaev"] = r.pohozaev;
    j["momentum"] = r.momentum;
    j["omega"] = r.omega;
    j["hhalf_sq"] = r.hhalf_sq;
    return j;
}

ordered_json model_json(const ModelParams& m) {
    ordered_json j;
    j["q"] = m.q;
    j["p"] = m.p;
    j["v"] = m.v[0];
    if (m.d == 2) j["vy"] = m.v[1];
    j["d"] = m.d;
    j["L"] = m.L;
    j["N"] = m.N;
    return j;
}

void finish_manifest(RunManifest& man, const Timer& timer, const fs::path& dir) {
    man.elapsed_seconds = timer.elapsed();
    write_manifest(man, dir / "manifest.json");
}

double resolve_rho(const Config& c, const char* section, double fallback) {
    return c.get_double(section, "rho", fallback);
}

}  // namespace

int run_groundstate(const Config& config, const RunOptions& opts) {
    Timer timer;
    ModelParams params = model_from(config);
    SolveConfig solve = solve_from(config);
    double rho = resolve_rho(config, "solver", 10.0);

    fs::path dir = opts.out_root / "groundstate";
    fs::create_directories(dir);

    GroundState gs = minimize(params, rho, solve);
    if (gs.converged_to == SolveOutcome::iteration_cap) {
        std::fprintf(stderr, "groundstate: solver hit the iteration cap (residual %.3g)\n",
                     gs.residual);
        return kExitNumerical;
    }

    save_field(gs.field, dir / "groundstate.hwf");
    export_field_csv(gs.field, dir / "groundstate.csv");

    ordered_json j;
    j["model"] = model_json(params);
    j["rho"] = gs.rho;
    j["converged_to"] = to_string(gs.converged_to);
    j["iterations"] = gs.iterations;
    j["residual"] = gs.residual;
    j["i_value"] = gs.i_value;
    j["flat_energy"] = gs.flat_energy;
    j["report"] = report_json(gs.report);
    if (gs.converged_to == SolveOutcome::minimizer) {
        CertificateReport cert = certify(gs, params, solve.pohozaev_delta);
        ordered_json cj;
        cj["pohozaev_zero"] = cert.pohozaev_zero;
        cj["pohozaev_abs"] = cert.pohozaev_abs;
        cj["pohozaev_tol"] = cert.pohozaev_tol;
        cj["energy_identity"] = cert.energy_identity;
        cj["energy_identity_rel"] = cert.energy_identity_rel;
        cj["lq_identity"] = cert.lq_identity;
        cj["lq_identity_rel"] = cert.lq_identity_rel;
        cj["a_delta_guard"] = cert.a_delta_guard;
        j["certificate"] = cj;
    }
    std::ofstream(dir / "groundstate.json") << j.dump(2) << "\n";

    RunManifest man;
    man.command = "groundstate";
    man.resolved_config = config;
    man.jobs = opts.jobs;
    man.started_at_utc = utc_now_string();
    man.outputs = {"groundstate.hwf", "groundstate.csv", "groundstate.json"};
    finish_manifest(man, timer, dir);
    if (!opts.quiet)
        std::printf("groundstate: rho=%.6g %s E=%.12g residual=%.3g (%d iterations)\n", rho,
                    to_string(gs.converged_to).c_str(), gs.report.energy, gs.residual,
                    gs.iterations);
    return kExitOk;
}

int run_scan(const Config& config, const RunOptions& opts) {
    Timer timer;
    ModelParams params = model_from(config);
    ScanConfig sc = scan_config_from(config);
    sc.jobs = opts.jobs;

    fs::path dir = opts.out_root / "scan";
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    std::vector<double> rhos = config.get_list("scan", "rhos", {});
    if (!rhos.empty()) {
        std::vector<ScanRecord> recs = scan_masses(params, rhos, sc);
        FILE* f = open_csv(dir / "scan.csv");
        std::fprintf(f, "rho,i_est,attained,residual,iterations\n");
        for (const ScanRecord& r : recs)
            std::fprintf(f, "%.17g,%.17g,%s,%.17g,%d\n", r.rho, r.i_est,
                         to_string(r.attained).c_str(), r.best.residual, r.best.iterations);
        std::fclose(f);
        outputs.push_back("scan.csv");

        SubadditivityReport sub = subadditivity_check(recs, params);
        ordered_json sj;
        sj["worst_gap"] = sub.worst_gap;
        sj["worst_monotone_jump"] = sub.worst_monotone_jump;
        sj["triples_checked"] = sub.triples_checked;
        std::ofstream(dir / "subadditivity.json") << sj.dump(2) << "\n";
        outputs.push_back("subadditivity.json");
    }

    bool do_bisect = config.get_bool("scan", "bisect", config.has("scan", "bracket_lo"));
    if (do_bisect) {
        double lo = config.get_double("scan", "bracket_lo", 0.05);
        double hi = config.get_double("scan", "bracket_hi", 10.0);
        double tol = config.get_double("scan", "tol_rho", 1e-2);
        if (!(lo > 0.0 && lo < hi)) {
            std::fprintf(stderr, "scan: invalid bracket (%g, %g)\n", lo, hi);
            return kExitConfig;
        }
        CriticalMassResult cm;
        try {
            cm = find_critical_mass(params, {lo, hi}, tol, sc);
        } catch (const std::runtime_error& e) {
            std::fprintf(stderr, "scan: %s\n", e.what());
            return kExitNumerical;
        }
        FILE* f = open_csv(dir / "bisection.csv");
        std::fprintf(f, "rho,attained,i_est\n");
        for (const BisectionStep& s : cm.trace)
            std::fprintf(f, "%.17g,%s,%.17g\n", s.rho, to_string(s.attained).c_str(), s.i_est);
        std::fclose(f);
        outputs.push_back("bisection.csv");

        ordered_json bj;
        bj["rho0_lo"] = cm.rho0_lo;
        bj["rho0_hi"] = cm.rho0_hi;
        bj["iterations"] = cm.iterations;
        bj["bracket_invariant_held"] = cm.bracket_invariant_held;
        bj["lo_i_est"] = cm.lo_record.i_est;
        bj["hi_i_est"] = cm.hi_record.i_est;
        std::ofstream(dir / "rho0.json") << bj.dump(2) << "\n";
        outputs.push_back("rho0.json");
        if (!opts.quiet)
            std::printf("scan: rho0 bracket (%.6g, %.6g) after %d bisection steps\n", cm.rho0_lo,
                        cm.rho0_hi, cm.iterations);
    }

    RunManifest man;
    man.command = "scan";
    man.resolved_config = config;
    man.jobs = opts.jobs;
    man.started_at_utc = utc_now_string();
    man.outputs = outputs;
    finish_manifest(man, timer, dir);
    return kExitOk;
}

int run_evolve(const Config& config, const RunOptions& opts) {
    Timer timer;
    ModelParams params = model_from(config);
    if (params.d != 1) {
        std::fprintf(stderr, "evolve: dynamics is only available for d = 1 "
                             "(well-posedness is established in 1D only)\n");
        return kExitConfig;
    }
    EvolveConfig ec = evolve_from(config);

    fs::path dir = opts.out_root / "evolve";
    fs::create_directories(dir / "snapshots");

    Field psi0;
    std::string fieldpath = config.get("evolve", "field", "");
    if (!fieldpath.empty()) {
        psi0 = load_field(fieldpath);
    } else {
        double rho = resolve_rho(config, "evolve", 10.0);
        GroundState gs = minimize(params, rho, solve_from(config));
        if (gs.converged_to != SolveOutcome::minimizer) {
            std::fprintf(stderr, "evolve: no ground state at rho=%g (%s)\n", rho,
                         to_string(gs.converged_to).c_str());
            return kExitNumerical;
        }
        psi0 = gs.field;
    }

    Trajectory traj = evolve(psi0, params, ec);
    if (traj.aborted) {
        std::fprintf(stderr, "evolve: non-finite state, last good time %.6g\n",
                     traj.last_good_time);
        return kExitNumerical;
    }

    FILE* f = open_csv(dir / "invariants.csv");
    std::fprintf(f, "t,mass,energy,momentum,ev\n");
    for (const InvariantSample& s : traj.invariants)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.mass, s.energy, s.momentum,
                     s.ev);
    std::fclose(f);

    std::vector<std::string> outputs = {"invariants.csv"};
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshots/snap_%06zu.hwf", i);
        save_field(traj.snapshots[i], dir / name);
        outputs.emplace_back(name);
    }

    DriftReport drift = invariant_drift(traj);
    ordered_json dj;
    dj["mass"] = drift.mass;
    dj["energy"] = drift.energy;
    dj["momentum"] = drift.momentum;
    dj["ev"] = drift.ev;
    std::ofstream(dir / "drift.json") << dj.dump(2) << "\n";
    outputs.push_back("drift.json");

    RunManifest man;
    man.command = "evolve";
    man.resolved_config = config;
    man.jobs = opts.jobs;
    man.started_at_utc = utc_now_string();
    man.outputs = outputs;
    finish_manifest(man, timer, dir);
    if (!opts.quiet)
        std::printf("evolve: T=%.6g steps=%zu mass drift=%.3g energy drift=%.3g\n", ec.t_final,
                    traj.times.size() - 1, drift.mass, drift.energy);
    return kExitOk;
}

int run_stability(const Config& config, const RunOptions& opts) {
    Timer timer;
    ModelParams params = model_from(config);
    if (params.d != 1) {
        std::fprintf(stderr, "stability: 1D only\n");
        return kExitConfig;
    }
    StabilityConfig st = stability_from(config);
    double rho = resolve_rho(config, "stability", 10.0);
    if (config.has("stability", "rho0_hi")) {
        double rho0_hi = config.get_double("stability", "rho0_hi", 0.0);
        if (rho <= rho0_hi) {
            std::fprintf(stderr,
                         "stability: rho=%.6g is not above the stored critical-mass bracket "
                         "(rho0_hi=%.6g); no minimizer regime\n",
                         rho, rho0_hi);
            return kExitConfig;
        }
    }

    std::vector<double> deltas = config.get_list("stability", "deltas", {1e-2});
    std::vector<PerturbationShape> shapes;
    {
        std::istringstream is(config.get("stability", "shapes", "dilation,noise,kick"));
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok == "dilation") shapes.push_back(PerturbationShape::dilation);
            else if (tok == "noise") shapes.push_back(PerturbationShape::noise);
            else if (tok == "kick") shapes.push_back(PerturbationShape::momentum_kick);
            else throw ConfigError("config key 'stability::shapes': unknown shape '" + tok + "'");
        }
    }

    fs::path dir = opts.out_root / "stability";
    fs::create_directories(dir);

    GroundState gs = minimize(params, rho, solve_from(config));
    if (gs.converged_to != SolveOutcome::minimizer) {
        std::fprintf(stderr, "stability: no ground state at rho=%g (%s)\n", rho,
                     to_string(gs.converged_to).c_str());
        return kExitNumerical;
    }

    std::vector<std::string> outputs;
    ordered_json summary = ordered_json::array();
    for (double delta : deltas) {
        for (PerturbationShape shape : shapes) {
            StabilityReport rep = stability_experiment(params, gs, delta, shape, st);
            char name[96];
            std::snprintf(name, sizeof(name), "stability_%s_delta%.0e.csv",
                          to_string(shape).c_str(), delta);
            FILE* f = open_csv(dir / name);
            std::fprintf(f, "t,distance,gamma_opt,y_opt\n");
            for (const StabilitySample& s : rep.series)
                std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", s.t, s.distance, s.gamma_opt, s.y_opt);
            std::fclose(f);
            outputs.emplace_back(name);
            ordered_json e;
            e["shape"] = to_string(shape);
            e["delta"] = delta;
            e["sup_distance"] = rep.sup_distance;
            summary.push_back(e);
            if (!opts.quiet)
                std::printf("stability: shape=%s delta=%.3g sup_distance=%.6g\n",
                            to_string(shape).c_str(), delta, rep.sup_distance);
        }
    }
    ordered_json j;
    j["rho"] = rho;
    j["horizon"] = st.horizon;
    j["experiments"] = summary;
    std::ofstream(dir / "stability.json") << j.dump(2) << "\n";
    outputs.push_back("stability.json");

    RunManifest man;
    man.command = "stability";
    man.resolved_config = config;
    man.jobs = opts.jobs;
    man.started_at_utc = utc_now_string();
    man.outputs = outputs;
    finish_manifest(man, timer, dir);
    return kExitOk;
}

namespace {

struct CheckRow {
    std::string name;
    bool pass;
    std::string detail;
};

Field random_smooth_field(std::shared_ptr<const Grid> g, std::uint64_t seed, double bandwidth,
                          double background, double amplitude) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<cplx> spec(g->size());
    for (int k = 0; k < g->N; ++k) {
        double xi = g->freqs[k];
        spec[k] = cplx{nd(rng), nd(rng)} * std::exp(-(xi * xi) / (bandwidth * bandwidth));
    }
    Field noise(g);
    engine_for(*g).inverse_into(spec, noise);
    double peak = 0.0;
    for (const cplx& z : noise.values) peak = std::max(peak, std::abs(z));
    Field out(g);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = background + amplitude / peak * noise.values[i];
    return out;
}

}  // namespace

int run_check(const Config& config, const RunOptions& opts) {
    (void)config;
    std::vector<CheckRow> rows;
    char buf[256];

    // Scaling laws of the dilation operator on Gaussians.
    {
        ModelParams params;
        params.q = 1.5;
        params.p = 2.5;
        params.validate();
        auto grid = make_grid(params);
        Field u = gaussian_field(grid, 1.0);
        double m0 = mass_sq(u), t0 = functionals(u, params).kinetic;
        double worst = 0.0;
        for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
            for (double alpha : {1.0 / (params.q - 1.0), 0.5, 1.0 / (params.p - 1.0)}) {
                Field ul = rescale(u, lambda, alpha);
                FunctionalReport fr = functionals(ul, params);
                double em = std::pow(lambda, 2.0 * alpha - 1.0) * m0;
                double et = std::pow(lambda, 2.0 * alpha) * t0;
                worst = std::max(worst, std::abs(fr.mass_sq - em) / em);
                worst = std::max(worst, std::abs(fr.kinetic - et) / et);
            }
        }
        std::snprintf(buf, sizeof(buf), "worst rel err %.2e (tol 1e-6)", worst);
        rows.push_back({"scaling laws (mass, kinetic)", worst <= 1e-6, buf});
    }

    // Central-difference directional derivatives against Re<grad E, w>.
    {
        ModelParams params;
        params.q = 1.5;
        params.p = 2.5;
        params.v[0] = 0.5;
        params.N = 256;
        params.validate();
        auto grid = make_grid(params);
        double worst = 0.0;
        const double eps = 1e-5;
        for (int trial = 0; trial < 20; ++trial) {
            Field u = random_smooth_field(grid, 100 + trial, 1.5, 0.8, 0.35);
            Field w = random_smooth_field(grid, 200 + trial, 1.5, 0.0, 0.7);
            Field up = u + eps * w, um = u - (eps)*w;
            double ep = functionals(up, params).energy, em = functionals(um, params).energy;
            double fd = (ep - em) / (2.0 * eps);
            double an = l2_inner(energy_gradient(u, params), w).real();
            worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
        }
        std::snprintf(buf, sizeof(buf), "worst rel err %.2e (tol 1e-5)", worst);
        rows.push_back({"gradient correctness (20 pairs)", worst <= 1e-5, buf});
    }

    // Pohozaev certificate on a large-domain minimizer.
    {
        ModelParams params;
        params.q = 1.5;
        params.p = 1.8;
        params.N = 65536;
        params.L = 5120.0;
        params.validate();
        SolveConfig sc;
        sc.multistart = {Initializer::gaussian(0.5), Initializer::gaussian(1.0)};
        GroundState gs = minimize(params, 10.0, sc);
        bool ok = gs.converged_to == SolveOutcome::minimizer;
        CertificateReport cert;
        if (ok) {
            cert = certify(gs, params);
            ok = cert.all();
        }
        std::snprintf(buf, sizeof(buf), "|G|=%.2e tol=%.2e idrel=%.2e", cert.pohozaev_abs,
                      cert.pohozaev_tol, cert.energy_identity_rel);
        rows.push_back({"pohozaev certificate (rho=10)", ok, buf});
    }

    // Conservation drifts under Strang.
    {
        ModelParams params;
        params.q = 1.5;
        params.p = 2.5;
        params.validate();
        auto grid = make_grid(params);
        Field psi0 = random_smooth_field(grid, 7, 1.5, 0.35, 0.12);
        EvolveConfig ec;
        ec.dt = 1e-3;
        ec.t_final = 10.0;
        ec.save_stride = 100;
        Trajectory traj = evolve(psi0, params, ec);
        DriftReport d = invariant_drift(traj);
        bool ok = d.mass <= 1e-12 && d.energy <= 1e-6 && d.ev <= 1e-6 && d.momentum <= 1e-8;
        std::snprintf(buf, sizeof(buf), "mass %.1e energy %.1e momentum %.1e", d.mass, d.energy,
                      d.momentum);
        rows.push_back({"conservation drifts (T=10, dt=1e-3)", ok, buf});
    }

    // Homogeneity of the single-power ground state energy.
    {
        ModelParams params;
        params.q = 1.5;
        params.p = 2.0;
        params.N = 8192;
        params.L = 160.0;
        params.validate();
        ScanConfig sc;
        HomogeneityReport rep = homogeneity_check(params, {1.2, 1.6, 2.0}, sc);
        bool ok = rep.all_negative && rep.slope_rel_err <= 0.05;
        std::snprintf(buf, sizeof(buf), "slope %.4g vs %.4g (rel %.2e)", rep.slope,
                      rep.exponent_exact, rep.slope_rel_err);
        rows.push_back({"homogeneity fit (p=2)", ok, buf});
    }

    // Weak subadditivity and monotonicity along a scan.
    {
        ModelParams params;
        params.q = 1.5;
        params.p = 2.5;
        params.N = 4096;
        params.validate();
        ScanConfig sc;
        sc.jobs = opts.jobs;
        std::vector<ScanRecord> recs =
            scan_masses(params, {0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.7, 2.85, 3.0}, sc);
        SubadditivityReport rep = subadditivity_check(recs, params);
        bool ok = rep.worst_gap <= 1e-4 && rep.worst_monotone_jump <= 1e-6;
        std::snprintf(buf, sizeof(buf), "worst gap %.2e, worst jump %.2e", rep.worst_gap,
                      rep.worst_monotone_jump);
        rows.push_back({"subadditivity + monotonicity", ok, buf});
    }

    bool all = true;
    std::printf("%-42s %-6s %s\n", "check", "result", "detail");
    for (const CheckRow& r : rows) {
        all = all && r.pass;
        std::printf("%-42s %-6s %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.detail.c_str());
    }
    return all ? kExitOk : kExitInvariant;
}

}  // namespace hwlab
