#pragma once

#include <optional>
#include <utility>

#include "hwlab/variational.hpp"

namespace hwlab {

// Branch classification for one mass.  Sign drives the bisection: a state
// with energy below -zero_branch_tol certifies the negative branch; a run
// that lands on the spreading floor (or within tolerance of zero energy)
// is the torus signature of the I = 0 branch.
enum class Attained { negative_minimizer, zero_spreading, undecided };

std::string to_string(Attained a);

struct ScanConfig {
    SolveConfig solve;
    double zero_branch_tol = 1e-4;
    int jobs = 1;
};

struct ScanRecord {
    double rho = 0.0;
    double i_est = 0.0;  // spreading-floor-referenced estimate of I_{rho^2}
    Attained attained = Attained::undecided;
    GroundState best;    // witness field and solver diagnostics
};

ScanRecord ground_energy(const ModelParams& params, double rho, const ScanConfig& config);

// Independent deterministic jobs over the rho grid, aggregated in input order.
std::vector<ScanRecord> scan_masses(const ModelParams& params, const std::vector<double>& rhos,
                                    const ScanConfig& config);

struct BisectionStep {
    double rho = 0.0;
    Attained attained = Attained::undecided;
    double i_est = 0.0;
};

struct CriticalMassResult {
    double rho0_lo = 0.0;
    double rho0_hi = 0.0;
    int iterations = 0;
    ScanRecord lo_record, hi_record;      // final bracket endpoints
    std::vector<BisectionStep> trace;     // endpoint evaluations + midpoints
    bool bracket_invariant_held = true;   // lo zero / hi negative at every step
};

// Bisection on the branch classification.  Throws if the initial endpoints do
// not classify as (zero, negative).
CriticalMassResult find_critical_mass(const ModelParams& params, std::pair<double, double> bracket,
                                      double tol_rho, const ScanConfig& config);

struct WitnessResult {
    bool found = false;
    double lambda = 0.0;
    double kick = 0.0;   // phase ramp wavenumber of the base profile
    double energy = 0.0;
    Field field;
};

struct WitnessOptions {
    int lambda_exp_max = 8;            // scan lambda in {2^0, ..., 2^lambda_exp_max}
    std::vector<double> kicks = {0.0}; // base profiles e^{i kappa x} g(x); aligned with v
    double min_width_cells = 2.0;      // stop when 1/lambda falls below this many cells
};

// Solver-independent negativity certificate: a mass-rho member of the
// lambda^{1/(q-1)} u(lambda x) family with E_v < 0, if the scan finds one.
// Failure is inconclusive, not a disproof.
WitnessResult negativity_witness(const ModelParams& params, double rho,
                                 const WitnessOptions& options = {});

// Builds the scaling family member lambda^{1/(q-1)} g(lambda x) over the
// unit-width Gaussian, without mass normalization (for the family-law tests).
Field witness_family_member(const ModelParams& params, std::shared_ptr<const Grid> grid,
                            double lambda);

struct HomogeneityReport {
    double exponent_exact = 0.0;  // (4 - 2(d-1)(p-1)) / (2 - d(p-1))
    double slope = 0.0;           // fitted d log|J| / d log rho
    double slope_rel_err = 0.0;
    bool all_negative = false;
    std::vector<double> rho, j_est;
};

// Minimizes the single-focusing-power energy on each sphere and fits
// log|J| against log rho.
HomogeneityReport homogeneity_check(const ModelParams& params, const std::vector<double>& rhos,
                                    const ScanConfig& config);

struct AlphaMonotonicity {
    double alpha = 0.0;
    bool strictly_decreasing = false;  // of i_est / rho^alpha on the negative branch
};

struct SubadditivityReport {
    double worst_gap = 0.0;           // max over triples of i(rho) - i(mu) - i(sqrt(rho^2-mu^2))
    double worst_monotone_jump = 0.0; // max increase of i_est along increasing rho
    int triples_checked = 0;
    std::vector<AlphaMonotonicity> alpha_q_window;  // alpha in [2, (4-2(d-1)(q-1))/(2-d(q-1)))
    std::vector<AlphaMonotonicity> alpha_p_window;  // alpha in [2, (4-2(d-1)(p-1))/(2-d(p-1)))
    std::vector<double> small_mass_decay;           // |i_est|/rho^2 on the three smallest masses
};

SubadditivityReport subadditivity_check(const std::vector<ScanRecord>& scan,
                                        const ModelParams& params);

}  // namespace hwlab
