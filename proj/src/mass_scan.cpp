#include "hwlab/mass_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace hwlab {

std::string to_string(Attained a) {
    switch (a) {
        case Attained::negative_minimizer: return "negative-minimizer";
        case Attained::zero_spreading: return "zero-spreading";
        case Attained::undecided: return "undecided";
    }
    return "?";
}

namespace {

Attained classify(const GroundState& best, double ztol) {
    if (best.i_value < -ztol) return Attained::negative_minimizer;
    if (best.converged_to == SolveOutcome::spreading) return Attained::zero_spreading;
    if (std::abs(best.i_value) <= ztol && best.converged_to == SolveOutcome::minimizer)
        return Attained::zero_spreading;
    return Attained::undecided;
}

}  // namespace

ScanRecord ground_energy(const ModelParams& params, double rho, const ScanConfig& config) {
    ScanRecord rec;
    rec.rho = rho;
    rec.best = minimize(params, rho, config.solve);
    rec.i_est = rec.best.i_value;
    rec.attained = classify(rec.best, config.zero_branch_tol);
    return rec;
}

std::vector<ScanRecord> scan_masses(const ModelParams& params, const std::vector<double>& rhos,
                                    const ScanConfig& config) {
    std::vector<ScanRecord> out(rhos.size());
    int jobs = std::max(1, config.jobs);
    if (jobs == 1 || rhos.size() <= 1) {
        for (std::size_t i = 0; i < rhos.size(); ++i) out[i] = ground_energy(params, rhos[i], config);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= rhos.size()) return;
            out[i] = ground_energy(params, rhos[i], config);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<std::size_t>(jobs, rhos.size()); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

CriticalMassResult find_critical_mass(const ModelParams& params, std::pair<double, double> bracket,
                                      double tol_rho, const ScanConfig& config) {
    auto [lo, hi] = bracket;
    if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("find_critical_mass: bad bracket");
    if (!(tol_rho > 0.0)) throw std::invalid_argument("find_critical_mass: tol_rho must be > 0");

    CriticalMassResult res;
    ScanRecord rl = ground_energy(params, lo, config);
    ScanRecord rh = ground_energy(params, hi, config);
    res.trace.push_back({lo, rl.attained, rl.i_est});
    res.trace.push_back({hi, rh.attained, rh.i_est});
    if (rl.attained == rh.attained)
        throw std::runtime_error("find_critical_mass: bracket endpoints classify identically");
    if (rl.attained != Attained::zero_spreading || rh.attained != Attained::negative_minimizer)
        throw std::runtime_error(
            "find_critical_mass: bracket must classify as (zero-spreading, negative-minimizer)");

    while (hi - lo > tol_rho) {
        double mid = 0.5 * (lo + hi);
        ScanRecord rm = ground_energy(params, mid, config);
        res.trace.push_back({mid, rm.attained, rm.i_est});
        ++res.iterations;
        switch (rm.attained) {
            case Attained::negative_minimizer:
                hi = mid;
                rh = std::move(rm);
                break;
            case Attained::zero_spreading:
                lo = mid;
                rl = std::move(rm);
                break;
            case Attained::undecided:
                // |i| marginally above the zero tolerance without a negative
                // certificate; treat as the zero side but flag the bracket.
                res.bracket_invariant_held = false;
                lo = mid;
                rl = std::move(rm);
                break;
        }
    }
    res.rho0_lo = lo;
    res.rho0_hi = hi;
    res.lo_record = std::move(rl);
    res.hi_record = std::move(rh);
    if (res.lo_record.attained != Attained::zero_spreading ||
        res.hi_record.attained != Attained::negative_minimizer)
        res.bracket_invariant_held = false;
    return res;
}

Field witness_family_member(const ModelParams& params, std::shared_ptr<const Grid> grid,
                            double lambda) {
    double amp = std::pow(lambda, 1.0 / (params.q - 1.0));
    return amp * gaussian_field(std::move(grid), 1.0 / lambda);
}

WitnessResult negativity_witness(const ModelParams& params, double rho,
                                 const WitnessOptions& options) {
    params.validate();
    if (!(rho > 0.0)) throw std::invalid_argument("negativity_witness: rho must be > 0");
    auto grid = make_grid(params);
    WitnessResult out;
    for (int e = 0; e <= options.lambda_exp_max; ++e) {
        const double lambda = std::pow(2.0, e);
        if (1.0 / lambda < options.min_width_cells * grid->h) break;  // unresolved widths prove nothing
        for (double kappa : options.kicks) {
            Field base = gaussian_field(grid, 1.0 / lambda);
            if (kappa != 0.0) {
                const Grid& g = *grid;
                if (g.d == 1) {
                    for (int j = 0; j < g.N; ++j)
                        base.values[j] *= std::polar(1.0, kappa * g.nodes[j]);
                } else {
                    // kick along v's direction
                    double vn = params.vnorm();
                    double e1 = vn > 0 ? params.v[0] / vn : 1.0;
                    double e2 = vn > 0 ? params.v[1] / vn : 0.0;
                    for (int j1 = 0; j1 < g.N; ++j1)
                        for (int j2 = 0; j2 < g.N; ++j2)
                            base.values[g.index(j1, j2)] *=
                                std::polar(1.0, kappa * (e1 * g.nodes[j1] + e2 * g.nodes[j2]));
                }
            }
            Field w = project_mass(base, rho);
            FunctionalReport f = functionals(w, params);
            if (f.energy < 0.0) {
                out.found = true;
                out.lambda = lambda;
                out.kick = kappa;
                out.energy = f.energy;
                out.field = std::move(w);
                return out;
            }
        }
    }
    return out;
}

HomogeneityReport homogeneity_check(const ModelParams& params, const std::vector<double>& rhos,
                                    const ScanConfig& config) {
    if (rhos.size() < 3) throw std::invalid_argument("homogeneity_check: need >= 3 masses");
    HomogeneityReport rep;
    const double d = params.d, p = params.p;
    rep.exponent_exact = (4.0 - 2.0 * (d - 1.0) * (p - 1.0)) / (2.0 - d * (p - 1.0));
    rep.rho = rhos;
    rep.all_negative = true;
    for (double rho : rhos) {
        GroundState gs = minimize(params, rho, config.solve, EnergyModel::focusing_only);
        rep.j_est.push_back(gs.i_value);
        if (!(gs.i_value < 0.0)) rep.all_negative = false;
    }
    if (!rep.all_negative) {
        rep.slope = 0.0;
        rep.slope_rel_err = std::numeric_limits<double>::infinity();
        return rep;
    }
    // Least-squares slope of log|J| against log rho.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rhos.size());
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        double x = std::log(rhos[i]), y = std::log(-rep.j_est[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.slope_rel_err = std::abs(rep.slope - rep.exponent_exact) / std::abs(rep.exponent_exact);
    return rep;
}

namespace {

std::optional<double> interp_i(const std::vector<ScanRecord>& scan, double rho) {
    if (scan.empty() || rho < scan.front().rho || rho > scan.back().rho) return std::nullopt;
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
        double a = scan[i].rho, b = scan[i + 1].rho;
        if (a <= rho && rho <= b) {
            double t = (b > a) ? (rho - a) / (b - a) : 0.0;
            return (1.0 - t) * scan[i].i_est + t * scan[i + 1].i_est;
        }
    }
    return std::nullopt;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i + 1] < v[i])) return false;
    return v.size() >= 2;
}

}  // namespace

SubadditivityReport subadditivity_check(const std::vector<ScanRecord>& scan,
                                        const ModelParams& params) {
    SubadditivityReport rep;
    std::vector<ScanRecord> s = scan;
    std::sort(s.begin(), s.end(), [](const ScanRecord& a, const ScanRecord& b) { return a.rho < b.rho; });

    for (std::size_t i = 0; i + 1 < s.size(); ++i)
        rep.worst_monotone_jump = std::max(rep.worst_monotone_jump, s[i + 1].i_est - s[i].i_est);

    for (const ScanRecord& R : s) {
        for (const ScanRecord& M : s) {
            if (!(M.rho < R.rho)) continue;
            double rem = std::sqrt(R.rho * R.rho - M.rho * M.rho);
            auto iv = interp_i(s, rem);
            if (!iv) continue;
            rep.worst_gap = std::max(rep.worst_gap, R.i_est - (M.i_est + *iv));
            ++rep.triples_checked;
        }
    }

    // alpha-monotonicity of i/rho^alpha on the strictly negative branch, for
    // both admissible windows (q-based and p-based; reported separately).
    const double d = params.d;
    auto window_check = [&](double expo) {
        std::vector<AlphaMonotonicity> out;
        double hi = (4.0 - 2.0 * (d - 1.0) * (expo - 1.0)) / (2.0 - d * (expo - 1.0));
        for (double alpha : {2.0, 0.5 * (2.0 + hi)}) {
            if (!(alpha < hi)) continue;
            std::vector<double> vals;
            for (const ScanRecord& r : s)
                if (r.attained == Attained::negative_minimizer)
                    vals.push_back(r.i_est / std::pow(r.rho, alpha));
            out.push_back({alpha, strictly_decreasing(vals)});
        }
        return out;
    };
    rep.alpha_q_window = window_check(params.q);
    rep.alpha_p_window = window_check(params.p);

    for (std::size_t i = 0; i < std::min<std::size_t>(3, s.size()); ++i)
        rep.small_mass_decay.push_back(std::abs(s[i].i_est) / (s[i].rho * s[i].rho));
    return rep;
}

}  // namespace hwlab
