#include "hwlab/stability.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hwlab {

std::string to_string(PerturbationShape s) {
    switch (s) {
        case PerturbationShape::dilation: return "dilation";
        case PerturbationShape::noise: return "noise";
        case PerturbationShape::momentum_kick: return "kick";
    }
    return "?";
}

OrbitDistanceResult orbit_distance(const Field& psi, const Field& u) {
    if (!same_grid(psi, u)) throw std::invalid_argument("orbit_distance: grid mismatch");
    require_finite(psi, "orbit_distance");
    const Grid& g = *psi.grid;
    if (!(l2_norm(u) > 0.0)) throw std::invalid_argument("orbit_distance: zero reference field");
    FftEngine& eng = engine_for(g);
    std::vector<cplx> ph = eng.forward(psi);
    std::vector<cplx> uh = eng.forward(u);

    // z_k = w(xi) conj(psihat) uhat; the inner product with u shifted by
    // y = s h is C(s) = (1/L^d) sum_k z_k e^{-2 pi i <k, s>/N}: a forward DFT.
    double npsi = 0.0, nu = 0.0;
    std::vector<cplx> z(ph.size());
    if (g.d == 1) {
        for (int k = 0; k < g.N; ++k) {
            double w = std::sqrt(1.0 + g.freqs[k] * g.freqs[k]);
            z[k] = w * std::conj(ph[k]) * uh[k];
            npsi += w * std::norm(ph[k]);
            nu += w * std::norm(uh[k]);
        }
    } else {
        for (int k1 = 0; k1 < g.N; ++k1)
            for (int k2 = 0; k2 < g.N; ++k2) {
                std::size_t i = g.index(k1, k2);
                double w = std::sqrt(1.0 + g.freqs[k1] * g.freqs[k1] + g.freqs[k2] * g.freqs[k2]);
                z[i] = w * std::conj(ph[i]) * uh[i];
                npsi += w * std::norm(ph[i]);
                nu += w * std::norm(uh[i]);
            }
    }
    const double vol = g.box_volume();
    npsi /= vol;
    nu /= vol;

    // Plain forward DFT of z (no quadrature weight): reuse the engine, then
    // undo its h^d scaling and apply 1/L^d.
    std::vector<cplx> corr;
    eng.forward(z, corr);
    const double fix = 1.0 / (g.cell_volume() * vol);

    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t s = 0; s < corr.size(); ++s) {
        double a = std::abs(corr[s]);
        if (a > best_abs) {
            best_abs = a;
            best = s;
        }
    }
    best_abs *= fix;
    OrbitDistanceResult out;
    out.distance = std::sqrt(std::max(npsi + nu - 2.0 * best_abs, 0.0));
    out.gamma_opt = -std::arg(corr[best]);
    if (g.d == 1) {
        int s = static_cast<int>(best);
        int sw = (s < g.N / 2) ? s : s - g.N;
        out.y_opt = sw * g.h;
    } else {
        int s1 = static_cast<int>(best) / g.N, s2 = static_cast<int>(best) % g.N;
        if (s1 >= g.N / 2) s1 -= g.N;
        if (s2 >= g.N / 2) s2 -= g.N;
        out.y_opt = std::hypot(s1 * g.h, s2 * g.h);  // magnitude only in 2D
    }
    return out;
}

Field perturbation_shape(const Field& u, PerturbationShape shape, const StabilityConfig& config) {
    const Grid& g = *u.grid;
    Field w(u.grid);
    switch (shape) {
        case PerturbationShape::dilation: {
            Field dil = rescale(u, config.dilation_lambda, g.d / 2.0);
            w = dil - u;
            break;
        }
        case PerturbationShape::noise: {
            // Band-limited complex noise, deterministic in the seed.
            std::mt19937_64 rng(config.seed);
            std::normal_distribution<double> nd(0.0, 1.0);
            std::vector<cplx> spec(g.size());
            const double bw = config.noise_bandwidth;
            for (int k = 0; k < g.N; ++k) {
                double xi = g.freqs[k];
                double env = std::exp(-(xi * xi) / (bw * bw));
                spec[k] = cplx{nd(rng), nd(rng)} * env;
            }
            engine_for(g).inverse_into(spec, w);
            break;
        }
        case PerturbationShape::momentum_kick: {
            for (int j = 0; j < g.N; ++j)
                w.values[j] = (std::polar(1.0, config.kick_kappa * g.nodes[j]) - 1.0) * u.values[j];
            break;
        }
    }
    double n = std::sqrt(hhalf_norm_sq(w));
    if (!(n > 0.0)) throw std::runtime_error("perturbation_shape: degenerate shape");
    return (1.0 / n) * w;
}

StabilityReport stability_experiment(const ModelParams& params, const GroundState& gs,
                                     double delta, PerturbationShape shape,
                                     const StabilityConfig& config) {
    if (params.d != 1) throw std::invalid_argument("stability_experiment: 1D only");
    if (!(delta >= 0.0)) throw std::invalid_argument("stability_experiment: delta must be >= 0");
    const Field& u = gs.field;

    Field psi0 = u;
    if (delta > 0.0) {
        Field w = perturbation_shape(u, shape, config);
        psi0 = project_mass(u + delta * w, gs.rho);
    }

    EvolveConfig ec;
    ec.dt = config.dt;
    ec.t_final = config.horizon;
    ec.save_stride = config.save_stride;
    ec.scheme = SplitScheme::strang;
    Trajectory traj = evolve(psi0, params, ec);

    StabilityReport rep;
    rep.delta = delta;
    rep.horizon = config.horizon;
    rep.shape = shape;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        OrbitDistanceResult od = orbit_distance(traj.snapshots[i], u);
        rep.series.push_back({traj.times[i], od.distance, od.gamma_opt, od.y_opt});
        rep.sup_distance = std::max(rep.sup_distance, od.distance);
    }
    return rep;
}

}  // namespace hwlab
