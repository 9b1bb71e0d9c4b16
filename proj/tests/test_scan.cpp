#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hwlab/mass_scan.hpp"
#include "test_util.hpp"

using namespace hwlab;
using hwlab::test::params_1d;

TEST_CASE("ground_energy: negative branch at rho=10, zero branch at rho=0.05") {
    ModelParams m = params_1d(1.5, 2.5);
    ScanConfig sc;
    ScanRecord hi = ground_energy(m, 10.0, sc);
    CHECK(hi.attained == Attained::negative_minimizer);
    CHECK(hi.i_est < -1e-4);

    ScanRecord lo = ground_energy(m, 0.05, sc);
    CHECK(lo.attained == Attained::zero_spreading);
    CHECK(lo.i_est > -1e-8);
    CHECK(lo.i_est < 1e-4);
    // raw solver energy equals the flat floor, which bounds the infimum
    double eflat = flat_state_energy(m, 0.05);
    CHECK(lo.best.report.energy <= eflat + 1e-10);
}

TEST_CASE("ground_energy: i_est never exceeds the flat-state bound") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 512);
    ScanConfig sc;
    for (double rho : {0.05, 0.5, 2.0}) {
        ScanRecord r = ground_energy(m, rho, sc);
        double c = rho / std::sqrt(m.L);
        double bound = m.L * (std::pow(c, m.q + 1.0) / (m.q + 1.0) -
                              std::pow(c, m.p + 1.0) / (m.p + 1.0));
        CHECK(r.best.report.energy <= bound + 1e-10);
    }
}

TEST_CASE("scan_masses: parallel jobs give identical records") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 512);
    std::vector<double> rhos{0.3, 0.8, 1.4, 2.2};
    ScanConfig s1, s4;
    s1.jobs = 1;
    s4.jobs = 4;
    auto a = scan_masses(m, rhos, s1);
    auto b = scan_masses(m, rhos, s4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].rho == b[i].rho);
        CHECK(a[i].i_est == b[i].i_est);  // bitwise
        CHECK(a[i].attained == b[i].attained);
    }
}

TEST_CASE("find_critical_mass: bracket shrinks and invariant holds") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 2048);
    ScanConfig sc;
    CriticalMassResult cm = find_critical_mass(m, {2.0, 3.5}, 0.05, sc);
    CHECK(cm.rho0_hi - cm.rho0_lo <= 0.05);
    CHECK(cm.rho0_lo < cm.rho0_hi);
    CHECK(cm.bracket_invariant_held);
    CHECK(cm.lo_record.attained == Attained::zero_spreading);
    CHECK(cm.hi_record.attained == Attained::negative_minimizer);
    // regression window from the desk-scale calibration runs
    CHECK(cm.rho0_lo > 2.4);
    CHECK(cm.rho0_hi < 2.8);
    // interval halves each iteration
    CHECK(cm.iterations >= 4);
}

TEST_CASE("find_critical_mass: degenerate and identically-classified brackets") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 512);
    ScanConfig sc;
    CHECK_THROWS(find_critical_mass(m, {5.0, 5.0}, 1e-2, sc));
    CHECK_THROWS(find_critical_mass(m, {6.0, 10.0}, 1.0, sc));   // both negative
    CHECK_THROWS(find_critical_mass(m, {0.02, 0.05}, 1e-2, sc)); // both zero
}

TEST_CASE("negativity_witness: found at rho=10, absent at rho=0.01") {
    ModelParams m = params_1d(1.5, 2.5);
    WitnessResult w = negativity_witness(m, 10.0);
    REQUIRE(w.found);
    CHECK(w.energy < 0.0);
    CHECK(std::abs(l2_norm(w.field) - 10.0) / 10.0 < 1e-10);
    // evaluate independently
    CHECK(functionals(w.field, m).energy == doctest::Approx(w.energy));

    WitnessResult none = negativity_witness(m, 0.01);
    CHECK_FALSE(none.found);
}

TEST_CASE("negativity_witness: boosted witness reaches lower masses with a kick") {
    ModelParams m = params_1d(1.5, 2.5, 0.5, 4096);
    WitnessOptions plain;
    WitnessOptions kicked;
    kicked.kicks = {0.0, 1.0, 2.0, 4.0, 8.0};
    // at rho=2.6 (above rho0(v=0.5) ~ 2.31) the unkicked Gaussian family fails
    WitnessResult a = negativity_witness(m, 2.6, plain);
    WitnessResult b = negativity_witness(m, 2.6, kicked);
    CHECK_FALSE(a.found);
    CHECK(b.found);
    CHECK(b.energy < 0.0);
}

TEST_CASE("witness family: paper mass-scaling law") {
    ModelParams m = params_1d(1.5, 2.5);
    auto g = make_grid(m);
    Field base = witness_family_member(m, g, 1.0);
    double n0 = l2_norm(base);
    for (double lam : {2.0, 4.0}) {
        Field ul = witness_family_member(m, g, lam);
        double want = std::pow(lam, (2.0 - m.d * (m.q - 1.0)) / (2.0 * (m.q - 1.0))) * n0;
        CHECK(std::abs(l2_norm(ul) - want) / want < 1e-6);
    }
}

TEST_CASE("homogeneity_check: p=2 slope within 5% and negative J") {
    ModelParams m = params_1d(1.5, 2.0, 0.0, 8192, 160.0);
    ScanConfig sc;
    HomogeneityReport rep = homogeneity_check(m, {1.2, 1.6, 2.0}, sc);
    CHECK(rep.exponent_exact == doctest::Approx(4.0));
    CHECK(rep.all_negative);
    CHECK(rep.slope_rel_err <= 0.05);
}

TEST_CASE("homogeneity exponent formula") {
    ModelParams m25 = params_1d(1.5, 2.5, 0.0, 64);
    ScanConfig sc;
    CHECK_THROWS(homogeneity_check(m25, {1.0, 2.0}, sc));  // needs >= 3 masses
    // exponent values from the scaling relation at d=1: 4/(3-p)
    ModelParams a = params_1d(1.5, 2.0, 0.0, 64);
    ModelParams b = params_1d(1.5, 2.5, 0.0, 64);
    HomogeneityReport ra, rb;
    ra.exponent_exact = (4.0 - 0.0) / (2.0 - a.p + 1.0);
    (void)ra;
    // exercise through the public API on a tiny grid (values unasserted)
    SolveConfig quick;
    quick.max_iters = 5;
    quick.multistart = {Initializer::gaussian(1.0)};
    ScanConfig qc;
    qc.solve = quick;
    HomogeneityReport h2 = homogeneity_check(a, {0.9, 1.0, 1.1}, qc);
    HomogeneityReport h25 = homogeneity_check(b, {0.9, 1.0, 1.1}, qc);
    CHECK(h2.exponent_exact == doctest::Approx(4.0));
    CHECK(h25.exponent_exact == doctest::Approx(8.0));
}

namespace {
ScanRecord rec(double rho, double i, Attained a) {
    ScanRecord r;
    r.rho = rho;
    r.i_est = i;
    r.attained = a;
    return r;
}
}  // namespace

TEST_CASE("subadditivity_check: zero branch is exactly subadditive") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 64);
    std::vector<ScanRecord> scan;
    for (double rho : {0.2, 0.4, 0.6, 0.8})
        scan.push_back(rec(rho, 0.0, Attained::zero_spreading));
    SubadditivityReport rep = subadditivity_check(scan, m);
    CHECK(rep.worst_gap == 0.0);
    CHECK(rep.worst_monotone_jump == 0.0);
    CHECK(rep.triples_checked > 0);
}

TEST_CASE("subadditivity_check: detects violations and monotone jumps") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 64);
    std::vector<ScanRecord> scan;
    scan.push_back(rec(1.0, 0.0, Attained::zero_spreading));
    scan.push_back(rec(2.0, -1.0, Attained::negative_minimizer));
    scan.push_back(rec(3.0, -0.5, Attained::negative_minimizer));  // increases: bad curve
    SubadditivityReport rep = subadditivity_check(scan, m);
    CHECK(rep.worst_monotone_jump == doctest::Approx(0.5));
    // i(3) = -0.5 > i(2) + i(sqrt(5)) ~ -1 + interp: violation must be visible
    CHECK(rep.worst_gap > 0.0);
}

TEST_CASE("subadditivity_check: alpha windows and small-mass decay slots") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 64);
    std::vector<ScanRecord> scan;
    scan.push_back(rec(0.5, 0.0, Attained::zero_spreading));
    scan.push_back(rec(1.0, 0.0, Attained::zero_spreading));
    scan.push_back(rec(2.8, -2.0, Attained::negative_minimizer));
    scan.push_back(rec(3.0, -6.0, Attained::negative_minimizer));
    scan.push_back(rec(3.2, -12.0, Attained::negative_minimizer));
    SubadditivityReport rep = subadditivity_check(scan, m);
    // q-window at d=1, q=1.5: [2, 8/3); p-window: [2, 8)
    REQUIRE(rep.alpha_q_window.size() == 2);
    REQUIRE(rep.alpha_p_window.size() == 2);
    CHECK(rep.alpha_q_window[0].alpha == doctest::Approx(2.0));
    CHECK(rep.alpha_q_window[1].alpha < 8.0 / 3.0);
    CHECK(rep.alpha_p_window[1].alpha < 8.0);
    for (const auto& w : rep.alpha_q_window) CHECK(w.strictly_decreasing);
    REQUIRE(rep.small_mass_decay.size() == 3);
    CHECK(rep.small_mass_decay[0] == 0.0);
}
