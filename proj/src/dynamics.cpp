#include "hwlab/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace hwlab {

namespace {

void require_1d(const Field& psi, const char* who) {
    if (psi.grid->d != 1)
        throw std::invalid_argument(std::string(who) + ": dynamics is 1D only");
}

InvariantSample sample_invariants(const Field& psi, const ModelParams& params, double t) {
    FunctionalReport f = functionals(psi, params);
    InvariantSample s;
    s.t = t;
    s.mass = f.mass_sq;
    // calE uses the plain |xi| symbol; recover it from the tilted report:
    // T_v = calE_quad - v.P  =>  calE_quad = T_v + v P, calE = calE_quad/2 + potentials.
    double calE_quad = f.kinetic + params.v[0] * f.momentum;
    s.energy = 0.5 * calE_quad + f.lq / (params.q + 1.0) - f.lp / (params.p + 1.0);
    s.momentum = f.momentum;
    s.ev = s.energy - 0.5 * params.v[0] * f.momentum;
    return s;
}

void linear_phase_inplace(std::vector<cplx>& spec, const Grid& g, double dt) {
    for (int k = 0; k < g.N; ++k) spec[k] *= std::polar(1.0, -dt * std::abs(g.freqs[k]));
}

void nonlinear_phase_inplace(std::vector<cplx>& v, const ModelParams& params, double dt) {
    const double q = params.q, p = params.p;
    for (cplx& z : v) {
        double a = std::abs(z);
        if (a > 0.0) z *= std::polar(1.0, -dt * (std::pow(a, q - 1.0) - std::pow(a, p - 1.0)));
    }
}

}  // namespace

Field linear_step(const Field& psi, double dt) {
    require_1d(psi, "linear_step");
    const Grid& g = *psi.grid;
    FftEngine& eng = engine_for(g);
    std::vector<cplx> spec = eng.forward(psi);
    linear_phase_inplace(spec, g, dt);
    Field out(psi.grid);
    eng.inverse_into(spec, out);
    return out;
}

Field nonlinear_step(const Field& psi, const ModelParams& params, double dt) {
    Field out = psi;
    nonlinear_phase_inplace(out.values, params, dt);
    return out;
}

Trajectory evolve(const Field& psi0, const ModelParams& params, const EvolveConfig& config) {
    require_1d(psi0, "evolve");
    require_finite(psi0, "evolve");
    if (!(config.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (!(config.t_final >= 0.0)) throw std::invalid_argument("evolve: t_final must be >= 0");

    const Grid& g = *psi0.grid;
    FftEngine& eng = engine_for(g);
    const double dt = config.dt;
    const long total_steps = std::lround(config.t_final / dt);
    const int stride = std::max(1, config.save_stride);
    const bool strang = config.scheme == SplitScheme::strang;

    Trajectory traj;
    auto record = [&](const Field& f, double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(f);
        traj.invariants.push_back(sample_invariants(f, params, t));
    };
    record(psi0, 0.0);
    traj.last_good_time = 0.0;

    Field psi = psi0;
    std::vector<cplx> spec;
    long done = 0;
    while (done < total_steps) {
        long batch = std::min<long>(stride, total_steps - done);
        if (strang) {
            // lin(dt/2) [nl(dt) lin(dt)]^{batch-1} nl(dt) lin(dt/2): interior
            // half-steps merged, identical composition, half the transforms.
            eng.forward(psi.values, spec);
            linear_phase_inplace(spec, g, 0.5 * dt);
            eng.inverse(spec, psi.values);
            for (long s = 0; s < batch; ++s) {
                nonlinear_phase_inplace(psi.values, params, dt);
                double lin_dt = (s + 1 < batch) ? dt : 0.5 * dt;
                eng.forward(psi.values, spec);
                linear_phase_inplace(spec, g, lin_dt);
                eng.inverse(spec, psi.values);
            }
        } else {
            for (long s = 0; s < batch; ++s) {
                eng.forward(psi.values, spec);
                linear_phase_inplace(spec, g, dt);
                eng.inverse(spec, psi.values);
                nonlinear_phase_inplace(psi.values, params, dt);
            }
        }
        done += batch;
        double t = done * dt;
        Field snap = psi;
        snap.grid = psi0.grid;
        if (!all_finite(snap)) {
            traj.aborted = true;
            return traj;
        }
        record(snap, t);
        traj.last_good_time = t;
    }
    return traj;
}

DriftReport invariant_drift(const Trajectory& traj) {
    if (traj.invariants.empty()) throw std::invalid_argument("invariant_drift: empty trajectory");
    const InvariantSample& i0 = traj.invariants.front();
    DriftReport d;
    for (const InvariantSample& s : traj.invariants) {
        d.mass = std::max(d.mass, std::abs(s.mass - i0.mass) / i0.mass);
        d.energy = std::max(d.energy, std::abs(s.energy - i0.energy) / std::max(1.0, std::abs(i0.energy)));
        d.momentum =
            std::max(d.momentum, std::abs(s.momentum - i0.momentum) / std::max(1.0, std::abs(i0.momentum)));
        d.ev = std::max(d.ev, std::abs(s.ev - i0.ev) / std::max(1.0, std::abs(i0.ev)));
    }
    return d;
}

}  // namespace hwlab
