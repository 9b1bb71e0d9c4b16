#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hwlab/variational.hpp"
#include "test_util.hpp"

using namespace hwlab;
using hwlab::test::params_1d;
using hwlab::test::random_smooth;

TEST_CASE("energy_gradient: zero field and flat state") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 128);
    auto g = make_grid(m);
    Field z(g);
    Field gz = energy_gradient(z, m);
    for (const cplx& v : gz.values) CHECK(std::abs(v) == 0.0);

    const double c = 0.8;
    Field flat(g);
    for (cplx& v : flat.values) v = cplx{c, 0.0};
    Field gf = energy_gradient(flat, m);
    double want = std::pow(c, m.q) - std::pow(c, m.p);
    for (const cplx& v : gf.values) CHECK(std::abs(v - want) < 1e-12);
}

TEST_CASE("energy_gradient: central differences on 20 random pairs") {
    ModelParams m = params_1d(1.5, 2.5, 0.5, 256);
    auto g = make_grid(m);
    const double eps = 1e-5;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Field u = random_smooth(g, 1000 + trial, 1.5, 0.8, 0.35);
        Field w = random_smooth(g, 2000 + trial, 1.5, 0.0, 0.7);
        double ep = functionals(u + eps * w, m).energy;
        double em = functionals(u - eps * w, m).energy;
        double fd = (ep - em) / (2.0 * eps);
        double an = l2_inner(energy_gradient(u, m), w).real();
        worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("energy_gradient: <grad E, u> recovers T + lq - lp") {
    ModelParams m = params_1d(1.6, 2.1, 0.3, 256);
    auto g = make_grid(m);
    Field u = random_smooth(g, 77, 2.0, 0.5, 0.4);
    FunctionalReport r = functionals(u, m);
    double lhs = l2_inner(energy_gradient(u, m), u).real();
    CHECK(std::abs(lhs - (r.kinetic + r.lq - r.lp)) / std::abs(lhs) < 1e-12);
}

TEST_CASE("project_mass basics") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 128);
    auto g = make_grid(m);
    Field u = random_smooth(g, 5, 2.0, 0.2, 1.0);
    Field pu = project_mass(u, 3.0);
    CHECK(std::abs(l2_norm(pu) - 3.0) / 3.0 < 1e-14);
    // homogeneity: 2u and u project identically
    Field p2 = project_mass(2.0 * u, 3.0);
    for (std::size_t i = 0; i < pu.size(); ++i)
        CHECK(std::abs(p2.values[i] - pu.values[i]) < 1e-13);
    // already on the sphere: unchanged
    Field q = project_mass(pu, 3.0);
    for (std::size_t i = 0; i < pu.size(); ++i)
        CHECK(std::abs(q.values[i] - pu.values[i]) < 1e-13);
    Field z(g);
    CHECK_THROWS_AS(project_mass(z, 1.0), std::invalid_argument);
}

TEST_CASE("lagrange_multiplier: flat state and single mode") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 128);
    auto g = make_grid(m);
    const double c = 0.6;
    Field flat(g);
    for (cplx& v : flat.values) v = cplx{c, 0.0};
    double om = lagrange_multiplier(flat, m);
    CHECK(std::abs(om - (-(std::pow(c, m.q - 1.0) - std::pow(c, m.p - 1.0)))) < 1e-12);

    // zero-mean single mode: omega = -(m(xi0) + lq/M - lp/M)
    ModelParams m2 = params_1d(1.5, 2.5, 0.25, 64, 2.0 * std::numbers::pi);
    auto g2 = make_grid(m2);
    Field mode = field_from(g2, std::function<cplx(double)>([](double x) {
                                return std::polar(0.5, 4.0 * x);
                            }));
    FunctionalReport r = functionals(mode, m2);
    double want = -((4.0 - 0.25 * 4.0) + r.lq / r.mass_sq - r.lp / r.mass_sq);
    CHECK(std::abs(lagrange_multiplier(mode, m2) - want) < 1e-12);
}

TEST_CASE("minimize: resolved minimizer at rho=10 (q=1.5, p=1.8)") {
    ModelParams m = params_1d(1.5, 1.8);
    SolveConfig sc;
    GroundState gs = minimize(m, 10.0, sc);
    CHECK(gs.converged_to == SolveOutcome::minimizer);
    CHECK(gs.report.energy < 0.0);
    CHECK(std::abs(l2_norm(gs.field) - 10.0) / 10.0 < 1e-12);
    // frozen regression window for the ground energy at these parameters
    CHECK(gs.report.energy == doctest::Approx(-30.887).epsilon(2e-3));
    // residual satisfies the Euler-Lagrange equation in the dual norm
    CHECK(gs.residual <= sc.tol_residual);
    // omega of a converged state makes grad E + omega u small pointwise too
    double om = lagrange_multiplier(gs.field, m);
    Field r = energy_gradient(gs.field, m);
    for (std::size_t i = 0; i < r.size(); ++i) r.values[i] += om * gs.field.values[i];
    CHECK(l2_norm(r) < 1e-5 * std::max(1.0, l2_norm(gs.field)));
}

TEST_CASE("minimize: spreading at small mass") {
    ModelParams m = params_1d(1.5, 2.5);
    SolveConfig sc;
    GroundState gs = minimize(m, 0.05, sc);
    CHECK(gs.converged_to == SolveOutcome::spreading);
    // raw energy sits at the flat floor, inside (-1e-8, 1e-4)
    CHECK(gs.report.energy > -1e-8);
    CHECK(gs.report.energy < 1e-4);
    // floor-referenced estimate of I is numerically zero
    CHECK(std::abs(gs.i_value) < 1e-8);
}

TEST_CASE("minimize: deterministic across repeated runs") {
    ModelParams m = params_1d(1.5, 1.8, 0.0, 256, 40.0);
    SolveConfig sc;
    sc.max_iters = 400;
    GroundState a = minimize(m, 4.0, sc);
    GroundState b = minimize(m, 4.0, sc);
    CHECK(a.iterations == b.iterations);
    CHECK(a.report.energy == b.report.energy);
    REQUIRE(a.field.size() == b.field.size());
    for (std::size_t i = 0; i < a.field.size(); ++i)
        CHECK(a.field.values[i] == b.field.values[i]);
}

TEST_CASE("minimize: gauge-shifted initializers give the same energy") {
    // starts u0 and e^{i gamma} u0(. + y) land on the same ground energy
    ModelParams m = params_1d(1.5, 1.8, 0.0, 512);
    SolveConfig sc;
    auto g = make_grid(m);
    Field g0 = gaussian_field(g, 1.0);
    GroundState base = minimize_from(m, 8.0, sc, g0);

    Field shifted(g);
    int shift = 37;
    for (int j = 0; j < m.N; ++j)
        shifted.values[j] = std::polar(1.0, 0.9) * g0.values[(j + shift) % m.N];
    GroundState moved = minimize_from(m, 8.0, sc, shifted);

    CHECK(std::abs(base.report.energy - moved.report.energy) < 1e-8);
}

TEST_CASE("certify: converged minimizer on a large domain passes") {
    ModelParams m = params_1d(1.5, 1.8, 0.0, 16384, 1280.0);
    SolveConfig sc;
    sc.multistart = {Initializer::gaussian(0.5), Initializer::gaussian(1.0)};
    GroundState gs = minimize(m, 10.0, sc);
    REQUIRE(gs.converged_to == SolveOutcome::minimizer);
    CertificateReport cert = certify(gs, m);
    INFO("pohozaev ", cert.pohozaev_abs, " tol ", cert.pohozaev_tol);
    CHECK(cert.energy_identity);
    CHECK(cert.lq_identity);
    CHECK(cert.a_delta_guard);
    // |G| <= max(1e-6 T, 1e-8) needs a larger box; at L=1280 the torus tail
    // defect dominates.  The full-tolerance check runs in the acceptance
    // suite at L=5120; here assert the L^{-2} trend band.
    CHECK(cert.pohozaev_abs < 5e-4);
}

TEST_CASE("certify: hand-built field violating G=0 fails (b) and (d)") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 512);
    auto g = make_grid(m);
    GroundState fake;
    fake.rho = 2.0;
    fake.field = project_mass(gaussian_field(g, 1.0), 2.0);
    fake.report = functionals(fake.field, m);
    fake.converged_to = SolveOutcome::minimizer;
    CertificateReport cert = certify(fake, m);
    CHECK_FALSE(cert.pohozaev_zero);
    CHECK_FALSE(cert.energy_identity);
    CHECK_FALSE(cert.lq_identity);
    CHECK_FALSE(cert.all());
}

TEST_CASE("certify: refuses non-minimizers") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 128);
    GroundState gs;
    gs.converged_to = SolveOutcome::spreading;
    CHECK_THROWS_AS(certify(gs, m), std::invalid_argument);
}

TEST_CASE("monotone descent contract: energies never increase across accepted iterates") {
    // indirect check: a very low iteration cap still never yields an energy
    // above the initializer's
    ModelParams m = params_1d(1.5, 1.8, 0.0, 256, 40.0);
    for (int cap : {1, 3, 10, 50}) {
        SolveConfig sc;
        sc.max_iters = cap;
        sc.multistart = {Initializer::gaussian(1.0)};
        GroundState gs = minimize(m, 5.0, sc);
        double e0 = functionals(project_mass(gaussian_field(make_grid(m), 1.0), 5.0), m).energy;
        CHECK(gs.report.energy <= e0 + 1e-13);
    }
}

TEST_CASE("flat multistart start reports the spreading floor immediately") {
    ModelParams m = params_1d(1.5, 2.5, 0.0, 512);
    SolveConfig sc;
    GroundState gs = minimize_single(m, 1.5, sc, Initializer::flat());
    CHECK(gs.converged_to == SolveOutcome::spreading);
    CHECK(std::abs(gs.i_value) < 1e-10);
    CHECK(std::abs(gs.report.energy - gs.flat_energy) < 1e-10);
}
