// Command-line front end: groundstate, scan, evolve, stability, check.
// Config file keys can be overridden with --set section::key=value; the
// output root comes from --out, the HWLAB_OUT environment variable, or
// ./hwlab_out, in that order.

#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hwlab/runner.hpp"

namespace {

int apply_overrides(hwlab::Config& config, const std::vector<std::string>& sets) {
    for (const std::string& s : sets) {
        auto eq = s.find('=');
        auto sep = s.find("::");
        if (eq == std::string::npos || sep == std::string::npos || sep > eq) {
            std::fprintf(stderr, "bad --set '%s', expected section::key=value\n", s.c_str());
            return hwlab::kExitConfig;
        }
        config.set(s.substr(0, sep), s.substr(sep + 2, eq - sep - 2), s.substr(eq + 1));
    }
    try {
        config.validate_schema();
    } catch (const hwlab::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return hwlab::kExitConfig;
    }
    return hwlab::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-Wave ground states, critical mass, and 1D dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_root;
    std::vector<std::string> sets;
    int jobs = 1;
    long seed = -1;
    bool quiet = false;
    app.add_option("-c,--config", config_path, "configuration file (key = value with [sections])");
    app.add_option("-o,--out", out_root, "output root directory");
    app.add_option("--set", sets, "override a config entry: section::key=value");
    app.add_option("-j,--jobs", jobs, "parallel jobs for scans")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for randomized perturbations");
    app.add_flag("-q,--quiet", quiet, "suppress progress output");

    auto* cmd_groundstate = app.add_subcommand("groundstate", "compute one constrained minimizer");
    auto* cmd_scan = app.add_subcommand("scan", "mass scan and critical-mass bisection");
    auto* cmd_evolve = app.add_subcommand("evolve", "1D split-step time evolution");
    auto* cmd_stability = app.add_subcommand("stability", "orbital stability experiments");
    auto* cmd_check = app.add_subcommand("check", "run the invariant battery");
    for (auto* sub : {cmd_groundstate, cmd_scan, cmd_evolve, cmd_stability, cmd_check})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    hwlab::Config config;
    try {
        if (!config_path.empty()) config = hwlab::Config::load(config_path);
    } catch (const hwlab::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return hwlab::kExitConfig;
    }
    if (int rc = apply_overrides(config, sets); rc != hwlab::kExitOk) return rc;
    if (seed >= 0) config.set("stability", "seed", std::to_string(seed));

    hwlab::RunOptions opts;
    opts.jobs = jobs;
    opts.quiet = quiet;
    if (!out_root.empty()) opts.out_root = out_root;
    else if (const char* env = std::getenv("HWLAB_OUT")) opts.out_root = env;

    try {
        if (cmd_groundstate->parsed()) return hwlab::run_groundstate(config, opts);
        if (cmd_scan->parsed()) return hwlab::run_scan(config, opts);
        if (cmd_evolve->parsed()) return hwlab::run_evolve(config, opts);
        if (cmd_stability->parsed()) return hwlab::run_stability(config, opts);
        if (cmd_check->parsed()) return hwlab::run_check(config, opts);
    } catch (const hwlab::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return hwlab::kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return hwlab::kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return hwlab::kExitNumerical;
    }
    return hwlab::kExitConfig;
}
