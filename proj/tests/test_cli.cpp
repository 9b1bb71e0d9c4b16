#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "hwlab/runner.hpp"

using namespace hwlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "hwlab_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    return std::string((std::istreambuf_iterator<char>(is)), {});
}

Config fast_model(const std::string& extra = "") {
    return Config::parse("[model]\nq = 1.5\np = 1.8\nN = 512\nL = 40\n"
                         "[solver]\nrho = 8\nmax_iters = 800\n" +
                         extra);
}

}  // namespace

TEST_CASE("config: parsing, defaults, diagnostics") {
    Config c = Config::parse("[model]\nq = 1.6\np = 2.2\n# comment\nv = 0.25\n");
    CHECK(c.get_double("model", "q", 0.0) == 1.6);
    CHECK(c.get_double("model", "L", 80.0) == 80.0);  // default
    ModelParams m = model_from(c);
    CHECK(m.q == 1.6);
    CHECK(m.v[0] == 0.25);
    CHECK(m.N == 1024);

    CHECK_THROWS_WITH_AS(Config::parse("[model]\nbogus_key = 1\n"),
                         doctest::Contains("bogus_key"), ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse("[nosuchsection]\nq = 1\n"),
                         doctest::Contains("nosuchsection"), ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse("[model]\nq 1.5\n"), doctest::Contains("key = value"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(Config::parse("[model]\nq = abc\n").get_double("model", "q", 0.0),
                         doctest::Contains("model::q"), ConfigError);
}

TEST_CASE("config: lists, bools, multistart parsing") {
    Config c = Config::parse(
        "[scan]\nrhos = 0.5, 1.0, 2.0\n[solver]\nprecondition = off\n"
        "multistart = gauss:0.5, gauss:2, witness:2, flat\n");
    auto rhos = c.get_list("scan", "rhos", {});
    REQUIRE(rhos.size() == 3);
    CHECK(rhos[1] == 1.0);
    SolveConfig s = solve_from(c);
    CHECK_FALSE(s.precondition);
    REQUIRE(s.multistart.size() == 4);
    CHECK(s.multistart[0].kind == Initializer::Kind::gaussian);
    CHECK(s.multistart[2].kind == Initializer::Kind::witness_scaling);
    CHECK(s.multistart[3].kind == Initializer::Kind::flat);
}

TEST_CASE("run_groundstate: default config exits 0 and emits the artifacts") {
    Config c;  // all defaults: q=1.5 p=1.8 rho=10 N=1024 L=80
    RunOptions opts;
    opts.out_root = fresh_dir("gs_default");
    opts.quiet = true;
    CHECK(run_groundstate(c, opts) == kExitOk);
    fs::path dir = opts.out_root / "groundstate";
    CHECK(fs::exists(dir / "groundstate.hwf"));
    CHECK(fs::exists(dir / "groundstate.csv"));
    CHECK(fs::exists(dir / "groundstate.json"));
    CHECK(fs::exists(dir / "manifest.json"));
    std::string j = slurp(dir / "groundstate.json");
    CHECK(j.find("\"converged_to\": \"minimizer\"") != std::string::npos);
}

TEST_CASE("run_groundstate: repeated runs are byte-identical") {
    Config c = fast_model();
    RunOptions a, b;
    a.out_root = fresh_dir("gs_det_a");
    b.out_root = fresh_dir("gs_det_b");
    a.quiet = b.quiet = true;
    REQUIRE(run_groundstate(c, a) == kExitOk);
    REQUIRE(run_groundstate(c, b) == kExitOk);
    CHECK(slurp(a.out_root / "groundstate/groundstate.hwf") ==
          slurp(b.out_root / "groundstate/groundstate.hwf"));
    CHECK(slurp(a.out_root / "groundstate/groundstate.csv") ==
          slurp(b.out_root / "groundstate/groundstate.csv"));
    CHECK(slurp(a.out_root / "groundstate/groundstate.json") ==
          slurp(b.out_root / "groundstate/groundstate.json"));
}

TEST_CASE("run_scan: jobs=1 and jobs=4 produce byte-identical outputs") {
    Config c = Config::parse(
        "[model]\nq = 1.5\np = 2.5\nN = 512\n"
        "[scan]\nrhos = 0.3, 0.9, 1.5, 2.2\nbisect = off\n");
    RunOptions a, b;
    a.out_root = fresh_dir("scan_j1");
    b.out_root = fresh_dir("scan_j4");
    a.jobs = 1;
    b.jobs = 4;
    a.quiet = b.quiet = true;
    REQUIRE(run_scan(c, a) == kExitOk);
    REQUIRE(run_scan(c, b) == kExitOk);
    CHECK(slurp(a.out_root / "scan/scan.csv") == slurp(b.out_root / "scan/scan.csv"));
    CHECK(slurp(a.out_root / "scan/subadditivity.json") ==
          slurp(b.out_root / "scan/subadditivity.json"));
}

TEST_CASE("run_scan: single-mass scan yields one CSV row") {
    Config c = Config::parse("[model]\nq = 1.5\np = 2.5\nN = 256\n[scan]\nrhos = 0.2\nbisect = off\n");
    RunOptions opts;
    opts.out_root = fresh_dir("scan_single");
    opts.quiet = true;
    REQUIRE(run_scan(c, opts) == kExitOk);
    std::string csv = slurp(opts.out_root / "scan/scan.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one row
}

TEST_CASE("run_scan: invalid bracket is a config error") {
    Config c = Config::parse("[model]\nN = 256\n[scan]\nbracket_lo = 5\nbracket_hi = 5\n");
    RunOptions opts;
    opts.out_root = fresh_dir("scan_bad");
    opts.quiet = true;
    CHECK(run_scan(c, opts) == kExitConfig);
}

TEST_CASE("run_evolve: refuses d=2") {
    Config c = Config::parse("[model]\nd = 2\nN = 16\nL = 10\n");
    RunOptions opts;
    opts.out_root = fresh_dir("evolve_2d");
    opts.quiet = true;
    CHECK(run_evolve(c, opts) == kExitConfig);
}

TEST_CASE("run_evolve: smoke run emits snapshots and invariants") {
    Config c = fast_model("[evolve]\ndt = 1e-3\nt_final = 0.05\nsave_stride = 25\nrho = 8\n");
    RunOptions opts;
    opts.out_root = fresh_dir("evolve_smoke");
    opts.quiet = true;
    REQUIRE(run_evolve(c, opts) == kExitOk);
    CHECK(fs::exists(opts.out_root / "evolve/invariants.csv"));
    CHECK(fs::exists(opts.out_root / "evolve/snapshots/snap_000000.hwf"));
    CHECK(fs::exists(opts.out_root / "evolve/snapshots/snap_000002.hwf"));
    CHECK(fs::exists(opts.out_root / "evolve/drift.json"));
}

TEST_CASE("run_stability: refuses rho at or below the stored bracket") {
    Config c = fast_model("[stability]\nrho = 3\nrho0_hi = 6.5\n");
    c.set("solver", "rho", "3");
    RunOptions opts;
    opts.out_root = fresh_dir("stab_refuse");
    opts.quiet = true;
    CHECK(run_stability(c, opts) == kExitConfig);
}

TEST_CASE("run_stability: short experiment writes series and summary") {
    Config c = fast_model(
        "[stability]\nrho = 8\ndeltas = 0.01\nshapes = noise\nhorizon = 0.5\nsave_stride = 100\n");
    RunOptions opts;
    opts.out_root = fresh_dir("stab_smoke");
    opts.quiet = true;
    REQUIRE(run_stability(c, opts) == kExitOk);
    CHECK(fs::exists(opts.out_root / "stability/stability_noise_delta1e-02.csv"));
    CHECK(fs::exists(opts.out_root / "stability/stability.json"));
}

#ifdef HWLAB_CLI_PATH
TEST_CASE("cli binary: exit codes and overrides") {
    const std::string cli = HWLAB_CLI_PATH;
    fs::path out = fresh_dir("cli_bin");

    std::string cmd = cli + " groundstate -q -o " + (out / "a").string() +
                      " --set model::N=512 --set model::L=40 --set model::p=1.8 --set solver::rho=8";
    CHECK(std::system(cmd.c_str()) == 0);

    // malformed config file names the offending key and exits 2
    fs::path bad = out / "bad.ini";
    std::ofstream(bad) << "[model]\nnot_a_key = 3\n";
    std::string cmd2 = cli + " groundstate -q -c " + bad.string() + " -o " + (out / "b").string() +
                       " 2> " + (out / "err.txt").string();
    int rc = std::system(cmd2.c_str());
    CHECK(WEXITSTATUS(rc) == kExitConfig);
    CHECK(slurp(out / "err.txt").find("not_a_key") != std::string::npos);

    // HWLAB_OUT is honored when --out is absent
    fs::path envout = out / "envroot";
    std::string cmd3 = "HWLAB_OUT=" + envout.string() + " " + cli +
                       " groundstate -q --set model::N=512 --set model::L=40 --set "
                       "model::p=1.8 --set solver::rho=8";
    CHECK(std::system(cmd3.c_str()) == 0);
    CHECK(fs::exists(envout / "groundstate/groundstate.hwf"));
}
#endif
