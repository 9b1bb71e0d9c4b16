#pragma once

#include "hwlab/spectral.hpp"

namespace hwlab {

enum class SplitScheme { strang, lie };

struct EvolveConfig {
    double dt = 1e-3;
    double t_final = 10.0;
    int save_stride = 100;  // steps between saved snapshots
    SplitScheme scheme = SplitScheme::strang;
};

struct InvariantSample {
    double t = 0.0;
    double mass = 0.0;      // M
    double energy = 0.0;    // calE (v-independent)
    double momentum = 0.0;  // P
    double ev = 0.0;        // E_v = calE - (v/2) P
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<InvariantSample> invariants;
    bool aborted = false;        // non-finite state encountered
    double last_good_time = 0.0;
};

// Exact linear subflow e^{-i dt sqrt(-Laplace)}: multiplier e^{-i dt |xi|}.
// 1D only (mirrors the well-posedness restriction).
Field linear_step(const Field& psi, double dt);

// Exact nonlinear subflow: |psi| is constant along it, so
// psi <- e^{-i dt (|psi|^{q-1} - |psi|^{p-1})} psi pointwise.
Field nonlinear_step(const Field& psi, const ModelParams& params, double dt);

// Strang (default) or Lie composition with merged interior half-steps;
// snapshots and the invariant series are recorded every save_stride steps.
Trajectory evolve(const Field& psi0, const ModelParams& params, const EvolveConfig& config);

struct DriftReport {
    double mass = 0.0;
    double energy = 0.0;
    double momentum = 0.0;
    double ev = 0.0;
};

// Max drift over the trajectory, relative to max(1, |initial value|) for the
// signed quantities and to the initial mass for the mass.
DriftReport invariant_drift(const Trajectory& traj);

}  // namespace hwlab
