#pragma once

#include <string>
#include <vector>

#include "hwlab/spectral.hpp"

namespace hwlab {

// Which energy is minimized: the full two-power functional E_v, or the
// single focusing power  Etilde = T/2 - lp/(p+1)  used by the homogeneity
// diagnostic (q-term dropped).
enum class EnergyModel { full, focusing_only };

struct Initializer {
    enum class Kind { gaussian, witness_scaling, flat };
    Kind kind = Kind::gaussian;
    double param = 1.0;  // gaussian: width; witness_scaling: lambda; flat: unused

    static Initializer gaussian(double width) { return {Kind::gaussian, width}; }
    static Initializer witness(double lambda) { return {Kind::witness_scaling, lambda}; }
    static Initializer flat() { return {Kind::flat, 0.0}; }
    std::string label() const;
};

// Defaults: Gaussian widths {0.5,1,2,4}, the lambda^{1/(q-1)} u(lambda x)
// scaling family at lambda {1,2,4}, and the flat state (which probes the
// spreading floor on the torus).
std::vector<Initializer> default_multistart();

struct SolveConfig {
    double tau0 = 0.5;            // initial step; later trials come from a BB estimate
    double tau_min = 1e-13;       // backtracking gives up below this
    double tau_max = 50.0;        // safeguard on the BB step
    int max_iters = 2000;
    double tol_residual = 1e-6;   // Euler-Lagrange residual, H^{-1/2} dual norm
    double tol_energy = 0.0;      // optional relative energy-stall stop (0 = off)
    bool precondition = true;     // multiplier (1 + m(xi))^{-1}
    std::vector<Initializer> multistart = default_multistart();
    // Spreading detection (torus signature of the vanishing regime): kinetic
    // below spread_kinetic_tol and energy within spread_energy_tol of the
    // flat-state energy, sustained for spread_window accepted iterations.
    double spread_kinetic_tol = 1e-3;
    double spread_energy_tol = 1e-4;
    int spread_window = 200;
    int polish_iters = 600;       // extra iterations after spreading fires
    double pohozaev_delta = 1e-3; // A_delta guard threshold on T
};

enum class SolveOutcome { minimizer, spreading, iteration_cap };

std::string to_string(SolveOutcome o);

struct GroundState {
    double rho = 0.0;
    Field field;
    FunctionalReport report;
    double residual = 0.0;
    int iterations = 0;
    SolveOutcome converged_to = SolveOutcome::iteration_cap;

    // Diagnostics beyond the core contract.
    EnergyModel model = EnergyModel::full;
    double flat_energy = 0.0;  // energy of the flat state at this (rho, L)
    double i_value = 0.0;      // energy estimate: raw E, or E - flat_energy when spreading
    int start_index = -1;      // which multistart initializer won
    bool stalled = false;      // backtracking exhausted before the residual tolerance
};

// L2 gradient of the energy: (sqrt(-Laplace) + i v.grad) u + |u|^{q-1} u - |u|^{p-1} u.
// Directional derivative: d/de E(u + e w)|_0 = Re <grad E(u), w>_{L2}.
Field energy_gradient(const Field& u, const ModelParams& params,
                      EnergyModel model = EnergyModel::full);

// (rho / ||u||_2) u
Field project_mass(const Field& u, double rho);

// omega = -(T_v + lq - lp) / ||u||_2^2
double lagrange_multiplier(const Field& u, const ModelParams& params);

// Energy of |u| = const = rho / L^{d/2}, the descent floor of the spreading
// branch on the torus.
double flat_state_energy(const ModelParams& params, double rho, EnergyModel model = EnergyModel::full);

// Single-start preconditioned projected descent.
GroundState minimize_single(const ModelParams& params, double rho, const SolveConfig& config,
                            const Initializer& init, EnergyModel model = EnergyModel::full);

// Same, from an explicit starting field (projected onto the sphere first).
GroundState minimize_from(const ModelParams& params, double rho, const SolveConfig& config,
                          const Field& start, EnergyModel model = EnergyModel::full);

// Best over the multistart list; ties broken by start index so the result is
// schedule-independent.
GroundState minimize(const ModelParams& params, double rho, const SolveConfig& config,
                     EnergyModel model = EnergyModel::full);

struct CertificateReport {
    // (a) Pohozaev G_v ~ 0, (b) E = ((d(q-1)-2)/(2d(q-1))) T + ((p-q)/((p+1)(q-1))) lp,
    // (c) A_delta emptiness guard, (d) lq = ((q+1)/(d(q-1))) (d(p-1)/(p+1) lp - T).
    bool pohozaev_zero = false;
    bool energy_identity = false;
    bool a_delta_guard = false;
    bool lq_identity = false;
    double pohozaev_abs = 0.0;
    double pohozaev_tol = 0.0;
    double energy_identity_rel = 0.0;
    double lq_identity_rel = 0.0;
    bool all() const { return pohozaev_zero && energy_identity && a_delta_guard && lq_identity; }
};

// Identity checks on a converged minimizer; identity tolerances are relative
// 1e-4, the Pohozaev tolerance is max(1e-6 T, 1e-8).  Throws if gs is not a
// minimizer.
CertificateReport certify(const GroundState& gs, const ModelParams& params, double delta = 1e-3);

}  // namespace hwlab
