#include "hwlab/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hwlab {

std::string Initializer::label() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::gaussian: os << "gaussian:" << param; break;
        case Kind::witness_scaling: os << "witness:" << param; break;
        case Kind::flat: os << "flat"; break;
    }
    return os.str();
}

std::vector<Initializer> default_multistart() {
    return {Initializer::gaussian(0.5), Initializer::gaussian(1.0), Initializer::gaussian(2.0),
            Initializer::gaussian(4.0), Initializer::witness(1.0), Initializer::witness(2.0),
            Initializer::witness(4.0), Initializer::flat()};
}

std::string to_string(SolveOutcome o) {
    switch (o) {
        case SolveOutcome::minimizer: return "minimizer";
        case SolveOutcome::spreading: return "spreading";
        case SolveOutcome::iteration_cap: return "iteration-cap";
    }
    return "?";
}

Field energy_gradient(const Field& u, const ModelParams& params, EnergyModel model) {
    require_finite(u, "energy_gradient");
    Field g = apply_symbol(u, params);
    const double q = params.q, p = params.p;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        const cplx z = u.values[i];
        const double a = std::abs(z);
        double w = -std::pow(a, p - 1.0);
        if (model == EnergyModel::full) w += std::pow(a, q - 1.0);
        g.values[i] += w * z;
    }
    return g;
}

Field project_mass(const Field& u, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("project_mass: rho must be > 0");
    double n = l2_norm(u);
    if (!(n > 0.0)) throw std::invalid_argument("project_mass: zero field");
    return (rho / n) * u;
}

double lagrange_multiplier(const Field& u, const ModelParams& params) {
    FunctionalReport r = functionals(u, params);
    if (!(r.mass_sq > 0.0)) throw std::invalid_argument("lagrange_multiplier: zero field");
    return r.omega;
}

double flat_state_energy(const ModelParams& params, double rho, EnergyModel model) {
    const double vol = (params.d == 1) ? params.L : params.L * params.L;
    const double c = rho / std::sqrt(vol);
    double e = -vol * std::pow(c, params.p + 1.0) / (params.p + 1.0);
    if (model == EnergyModel::full) e += vol * std::pow(c, params.q + 1.0) / (params.q + 1.0);
    return e;
}

namespace {

struct EnergyTerms {
    double kinetic, lq, lp, energy;
};

EnergyTerms energy_terms(const Field& u, const ModelParams& params, EnergyModel model) {
    const Grid& g = *u.grid;
    double lq = 0.0, lp = 0.0;
    for (const cplx& z : u.values) {
        double a = std::abs(z);
        lp += std::pow(a, params.p + 1.0);
        if (model == EnergyModel::full) lq += std::pow(a, params.q + 1.0);
    }
    lq *= g.cell_volume();
    lp *= g.cell_volume();
    std::vector<cplx> spec = engine_for(g).forward(u);
    double kin = 0.0;
    if (g.d == 1) {
        for (int k = 0; k < g.N; ++k) {
            double xi = g.freqs[k];
            kin += (std::abs(xi) - params.v[0] * xi) * std::norm(spec[k]);
        }
    } else {
        for (int k1 = 0; k1 < g.N; ++k1)
            for (int k2 = 0; k2 < g.N; ++k2) {
                double x1 = g.freqs[k1], x2 = g.freqs[k2];
                kin += (std::hypot(x1, x2) - params.v[0] * x1 - params.v[1] * x2) *
                       std::norm(spec[g.index(k1, k2)]);
            }
    }
    kin /= g.box_volume();
    double e = 0.5 * kin - lp / (params.p + 1.0);
    if (model == EnergyModel::full) e += lq / (params.q + 1.0);
    return {kin, lq, lp, e};
}

Field build_initializer(const ModelParams& params, std::shared_ptr<const Grid> grid, double rho,
                        const Initializer& init) {
    switch (init.kind) {
        case Initializer::Kind::gaussian:
            return project_mass(gaussian_field(grid, init.param), rho);
        case Initializer::Kind::witness_scaling: {
            // lambda^{1/(q-1)} u(lambda x) with u the unit-width Gaussian;
            // after mass projection only the shape (width 1/lambda) survives.
            double lam = init.param;
            Field f = gaussian_field(grid, 1.0 / lam);
            double amp = std::pow(lam, 1.0 / (params.q - 1.0));
            return project_mass(amp * f, rho);
        }
        case Initializer::Kind::flat: {
            Field f(grid);
            const double c = rho / std::sqrt(grid->d == 1 ? grid->L : grid->L * grid->L);
            for (cplx& z : f.values) z = cplx{c, 0.0};
            return f;
        }
    }
    throw std::logic_error("build_initializer: bad kind");
}

// H^{-1/2} dual norm of the Euler-Lagrange residual spectrum.
double dual_residual_norm(const Grid& g, const std::vector<cplx>& spec) {
    double s = 0.0;
    if (g.d == 1) {
        for (int k = 0; k < g.N; ++k)
            s += std::norm(spec[k]) / std::sqrt(1.0 + g.freqs[k] * g.freqs[k]);
    } else {
        for (int k1 = 0; k1 < g.N; ++k1)
            for (int k2 = 0; k2 < g.N; ++k2) {
                double xi2 = g.freqs[k1] * g.freqs[k1] + g.freqs[k2] * g.freqs[k2];
                s += std::norm(spec[g.index(k1, k2)]) / std::sqrt(1.0 + xi2);
            }
    }
    return std::sqrt(s / g.box_volume());
}

}  // namespace

GroundState minimize_single(const ModelParams& params, double rho, const SolveConfig& config,
                            const Initializer& init, EnergyModel model) {
    params.validate();
    auto grid = make_grid(params);
    return minimize_from(params, rho, config, build_initializer(params, grid, rho, init), model);
}

GroundState minimize_from(const ModelParams& params, double rho, const SolveConfig& config,
                          const Field& start, EnergyModel model) {
    params.validate();
    if (!(rho > 0.0)) throw std::invalid_argument("minimize: rho must be > 0");
    auto grid = start.grid;
    if (!grid || grid->d != params.d || grid->N != params.N || grid->L != params.L)
        throw std::invalid_argument("minimize: start field grid does not match params");
    const Grid& g = *grid;
    FftEngine& eng = engine_for(g);

    Field u = project_mass(start, rho);
    EnergyTerms cur = energy_terms(u, params, model);

    const double eflat = flat_state_energy(params, rho, model);
    const bool detect_spreading = (model == EnergyModel::full);

    GroundState out;
    out.rho = rho;
    out.model = model;
    out.flat_energy = eflat;

    double tau = config.tau0;
    int spread_count = 0;
    int energy_stall_count = 0;
    bool spreading = false, stalled = false;
    int polish_left = -1;
    double res = std::numeric_limits<double>::infinity();

    std::vector<cplx> spec, pg_spec;
    Field dir(grid), trial(grid);
    Field prev_u, prev_dir;
    bool have_prev = false;

    const double q = params.q, p = params.p;
    int it = 0;
    for (it = 0; it < config.max_iters + std::max(config.polish_iters, 0); ++it) {
        if (!spreading && it >= config.max_iters) break;

        // Gradient, multiplier, tangential residual r = grad E + omega u.
        Field grad = energy_gradient(u, params, model);
        double omega = -(cur.kinetic + cur.lq - cur.lp) / (rho * rho);
        Field r = grad;
        for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += omega * u.values[i];

        spec = eng.forward(r);
        res = dual_residual_norm(g, spec);
        if (res <= config.tol_residual && !spreading) {
            bool flatlike = cur.kinetic < config.spread_kinetic_tol &&
                            std::abs(cur.energy - eflat) < config.spread_energy_tol;
            out.converged_to = (detect_spreading && flatlike) ? SolveOutcome::spreading
                                                              : SolveOutcome::minimizer;
            break;
        }

        // Preconditioned direction.
        if (config.precondition) {
            if (g.d == 1) {
                for (int k = 0; k < g.N; ++k) {
                    double xi = g.freqs[k];
                    spec[k] /= 1.0 + std::abs(xi) - params.v[0] * xi;
                }
            } else {
                for (int k1 = 0; k1 < g.N; ++k1)
                    for (int k2 = 0; k2 < g.N; ++k2) {
                        double x1 = g.freqs[k1], x2 = g.freqs[k2];
                        spec[g.index(k1, k2)] /=
                            1.0 + std::hypot(x1, x2) - params.v[0] * x1 - params.v[1] * x2;
                    }
            }
            eng.inverse_into(spec, dir);
        } else {
            dir = r;
        }

        // Barzilai-Borwein trial step from the last accepted move.
        if (have_prev) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < u.values.size(); ++i) {
                cplx s = u.values[i] - prev_u.values[i];
                cplx y = dir.values[i] - prev_dir.values[i];
                num += std::norm(s);
                den += (std::conj(s) * y).real();
            }
            tau = (den > 1e-300) ? std::clamp(num / den, 1e-4, config.tau_max) : config.tau0;
        }
        prev_u = u;
        prev_dir = dir;
        have_prev = true;

        // Monotone Armijo backtracking, factor 0.5.
        double t = tau;
        bool accepted = false;
        EnergyTerms next{};
        while (t >= config.tau_min) {
            for (std::size_t i = 0; i < u.values.size(); ++i)
                trial.values[i] = u.values[i] - t * dir.values[i];
            Field cand = project_mass(trial, rho);
            EnergyTerms et = energy_terms(cand, params, model);
            if (std::isfinite(et.energy) && et.energy <= cur.energy) {
                u = std::move(cand);
                next = et;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            stalled = true;
            out.converged_to = (res <= config.tol_residual) ? SolveOutcome::minimizer
                                                             : SolveOutcome::iteration_cap;
            break;
        }
        double de = cur.energy - next.energy;
        cur = next;

        if (config.tol_energy > 0.0 &&
            de <= config.tol_energy * std::max(1.0, std::abs(cur.energy))) {
            if (++energy_stall_count >= 50 && !spreading) {
                out.converged_to = (res <= config.tol_residual) ? SolveOutcome::minimizer
                                                                : SolveOutcome::iteration_cap;
                break;
            }
        } else {
            energy_stall_count = 0;
        }

        if (detect_spreading) {
            bool flatlike = cur.kinetic < config.spread_kinetic_tol &&
                            std::abs(cur.energy - eflat) < config.spread_energy_tol;
            if (flatlike) {
                if (!spreading && ++spread_count >= config.spread_window) {
                    spreading = true;
                    polish_left = config.polish_iters;
                    out.converged_to = SolveOutcome::spreading;
                }
            } else if (!spreading) {
                spread_count = 0;
            }
            if (spreading) {
                if (std::abs(cur.energy - eflat) <= 1e-12 * std::max(1.0, std::abs(eflat))) break;
                if (polish_left-- <= 0) break;
            }
        }
    }

    out.field = u;
    out.report = functionals(u, params);
    out.residual = res;
    out.iterations = it;
    out.stalled = stalled;
    if (out.converged_to == SolveOutcome::iteration_cap && spreading)
        out.converged_to = SolveOutcome::spreading;
    out.i_value = (out.converged_to == SolveOutcome::spreading) ? cur.energy - eflat : cur.energy;
    if (model == EnergyModel::focusing_only) {
        // report.energy carries the full functional; overwrite with the
        // focusing-only values the solve actually used.
        out.report.energy = cur.energy;
        out.report.pohozaev = cur.kinetic - params.d * (params.p - 1.0) / (params.p + 1.0) * cur.lp;
        out.i_value = cur.energy;
    }
    return out;
}

GroundState minimize(const ModelParams& params, double rho, const SolveConfig& config,
                     EnergyModel model) {
    if (config.multistart.empty()) throw std::invalid_argument("minimize: empty multistart list");
    GroundState best;
    bool first = true;
    for (std::size_t s = 0; s < config.multistart.size(); ++s) {
        GroundState gs = minimize_single(params, rho, config, config.multistart[s], model);
        gs.start_index = static_cast<int>(s);
        // Total order: i_value, then start index (first hit wins ties).
        if (first || gs.i_value < best.i_value) {
            best = std::move(gs);
            first = false;
        }
    }
    return best;
}

CertificateReport certify(const GroundState& gs, const ModelParams& params, double delta) {
    if (gs.converged_to != SolveOutcome::minimizer)
        throw std::invalid_argument("certify: ground state is not a converged minimizer");
    const FunctionalReport& r = gs.report;
    const double d = params.d, q = params.q, p = params.p;
    CertificateReport c;

    c.pohozaev_abs = std::abs(r.pohozaev);
    c.pohozaev_tol = std::max(1e-6 * r.kinetic, 1e-8);
    c.pohozaev_zero = c.pohozaev_abs <= c.pohozaev_tol;

    double rhs = (d * (q - 1.0) - 2.0) / (2.0 * d * (q - 1.0)) * r.kinetic +
                 (p - q) / ((p + 1.0) * (q - 1.0)) * r.lp;
    c.energy_identity_rel = std::abs(r.energy - rhs) / std::max(std::abs(r.energy), 1e-300);
    c.energy_identity = c.energy_identity_rel <= 1e-4;

    double lq_pred = (q + 1.0) / (d * (q - 1.0)) *
                     (d * (p - 1.0) / (p + 1.0) * r.lp - r.kinetic);
    c.lq_identity_rel = std::abs(r.lq - lq_pred) / std::max(r.lq, 1e-300);
    c.lq_identity = c.lq_identity_rel <= 1e-4;

    bool in_a_delta = r.energy <= 0.0 && c.pohozaev_abs <= c.pohozaev_tol && r.kinetic <= delta;
    c.a_delta_guard = !in_a_delta;
    return c;
}

}  // namespace hwlab
