#pragma once

#include <cstdint>

#include "hwlab/dynamics.hpp"
#include "hwlab/variational.hpp"

namespace hwlab {

// Distance from psi to the orbit {e^{i gamma} u(. - y)} in H^{1/2}, minimized
// over grid-aligned translations y and continuous phase gamma.  Convention:
// the orbit element is e^{i gamma} u(x - y), so psi = e^{i 0.7} u(. + 2.5)
// reports gamma_opt ~ 0.7, y_opt ~ -2.5.
struct OrbitDistanceResult {
    double distance = 0.0;
    double gamma_opt = 0.0;
    double y_opt = 0.0;
};

OrbitDistanceResult orbit_distance(const Field& psi, const Field& u);

enum class PerturbationShape { dilation, noise, momentum_kick };

std::string to_string(PerturbationShape s);

struct StabilityConfig {
    double horizon = 20.0;
    double dt = 1e-3;
    int save_stride = 200;
    std::uint64_t seed = 1;
    double kick_kappa = 0.5;       // phase ramp wavenumber of the kick shape
    double dilation_lambda = 1.25; // width factor of the dilation shape
    double noise_bandwidth = 1.0;  // spectral width of the noise shape
};

struct StabilitySample {
    double t = 0.0;
    double distance = 0.0;
    double gamma_opt = 0.0;
    double y_opt = 0.0;
};

struct StabilityReport {
    double delta = 0.0;
    double horizon = 0.0;
    PerturbationShape shape = PerturbationShape::noise;
    double sup_distance = 0.0;
    std::vector<StabilitySample> series;
};

// Unit-H^{1/2} perturbation direction for the given shape, built around u.
Field perturbation_shape(const Field& u, PerturbationShape shape, const StabilityConfig& config);

// psi0 = project_mass(u + delta * shape, rho), evolved to the horizon; the
// distance to the orbit of u is recorded along the way.  delta is the
// H^{1/2} size of the applied perturbation.
StabilityReport stability_experiment(const ModelParams& params, const GroundState& gs,
                                     double delta, PerturbationShape shape,
                                     const StabilityConfig& config);

}  // namespace hwlab
