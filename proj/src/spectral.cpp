#include "hwlab/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hwlab {

double symbol_value(const Grid& g, const ModelParams& params, int k1, int k2) {
    if (g.d == 1) {
        double xi = g.freqs[k1];
        return std::abs(xi) - params.v[0] * xi;
    }
    double x1 = g.freqs[k1], x2 = g.freqs[k2];
    return std::hypot(x1, x2) - params.v[0] * x1 - params.v[1] * x2;
}

namespace {

template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    if (g.d == 1) {
        for (int k = 0; k < g.N; ++k) fn(static_cast<std::size_t>(k), g.freqs[k], 0.0);
    } else {
        for (int k1 = 0; k1 < g.N; ++k1)
            for (int k2 = 0; k2 < g.N; ++k2) fn(g.index(k1, k2), g.freqs[k1], g.freqs[k2]);
    }
}

}  // namespace

Field apply_symbol(const Field& u, const ModelParams& params) {
    require_finite(u, "apply_symbol");
    const Grid& g = *u.grid;
    if (g.d != params.d || g.N != params.N || g.L != params.L)
        throw std::invalid_argument("apply_symbol: grid does not match params");
    FftEngine& eng = engine_for(g);
    std::vector<cplx> spec = eng.forward(u);
    const double v1 = params.v[0], v2 = params.v[1];
    for_each_mode(g, [&](std::size_t i, double x1, double x2) {
        double m = (g.d == 1) ? std::abs(x1) - v1 * x1 : std::hypot(x1, x2) - v1 * x1 - v2 * x2;
        spec[i] *= m;
    });
    Field out(u.grid);
    eng.inverse_into(spec, out);
    return out;
}

double mass_sq(const Field& u) {
    double s = 0.0;
    for (const cplx& z : u.values) s += std::norm(z);
    return s * u.grid->cell_volume();
}

double l2_norm(const Field& u) { return std::sqrt(mass_sq(u)); }

cplx l2_inner(const Field& a, const Field& b) {
    if (!same_grid(a, b)) throw std::invalid_argument("l2_inner: grid mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
    return s * a.grid->cell_volume();
}

double hhalf_norm_sq(const Field& u) {
    require_finite(u, "hhalf_norm_sq");
    const Grid& g = *u.grid;
    std::vector<cplx> spec = engine_for(g).forward(u);
    double s = 0.0;
    for_each_mode(g, [&](std::size_t i, double x1, double x2) {
        double xi2 = (g.d == 1) ? x1 * x1 : x1 * x1 + x2 * x2;
        s += std::sqrt(1.0 + xi2) * std::norm(spec[i]);
    });
    return s / g.box_volume();
}

FunctionalReport functionals(const Field& u, const ModelParams& params) {
    require_finite(u, "functionals");
    const Grid& g = *u.grid;
    FunctionalReport r;
    const double hd = g.cell_volume();
    double lq = 0.0, lp = 0.0, m2 = 0.0;
    for (const cplx& z : u.values) {
        double a2 = std::norm(z);
        double a = std::sqrt(a2);
        m2 += a2;
        lq += std::pow(a, params.q + 1.0);
        lp += std::pow(a, params.p + 1.0);
    }
    r.mass_sq = m2 * hd;
    r.lq = lq * hd;
    r.lp = lp * hd;

    std::vector<cplx> spec = engine_for(g).forward(u);
    const double v1 = params.v[0], v2 = params.v[1];
    double kin = 0.0, mom = 0.0, hh = 0.0;
    for_each_mode(g, [&](std::size_t i, double x1, double x2) {
        double a2 = std::norm(spec[i]);
        double m = (g.d == 1) ? std::abs(x1) - v1 * x1 : std::hypot(x1, x2) - v1 * x1 - v2 * x2;
        kin += m * a2;
        if (g.d == 1) mom += x1 * a2;
        double xi2 = (g.d == 1) ? x1 * x1 : x1 * x1 + x2 * x2;
        hh += std::sqrt(1.0 + xi2) * a2;
    });
    const double lvol = g.box_volume();
    r.kinetic = kin / lvol;
    r.momentum = (g.d == 1) ? mom / lvol : 0.0;
    r.hhalf_sq = hh / lvol;

    r.energy = 0.5 * r.kinetic + r.lq / (params.q + 1.0) - r.lp / (params.p + 1.0);
    const double d = params.d;
    r.pohozaev = r.kinetic + d * (params.q - 1.0) / (params.q + 1.0) * r.lq -
                 d * (params.p - 1.0) / (params.p + 1.0) * r.lp;
    r.omega = (r.mass_sq > 0.0) ? -(r.kinetic + r.lq - r.lp) / r.mass_sq : 0.0;
    return r;
}

namespace {

// Per-axis evaluation matrix E[j*N+k] = phi_k(lambda * x_j) of the trig basis
// phi_k(y) = e^{i xi_k (y - x0)}, with the Nyquist exponential replaced by its
// cosine so real fields interpolate to real values off-grid.  Rows whose
// target point leaves the fundamental domain are zeroed: u is the restriction
// of a decaying whole-space field, not a periodic replica, so dilation with
// lambda > 1 must not wrap contracted copies into the box.
std::vector<cplx> zoom_matrix(const Grid& g, double lambda) {
    const int N = g.N;
    const double x0 = g.nodes[0];
    std::vector<cplx> E(static_cast<std::size_t>(N) * N);
    for (int j = 0; j < N; ++j) {
        double target = lambda * g.nodes[j];
        if (std::abs(target) > 0.5 * g.L) continue;  // row stays zero
        double y = target - x0;
        for (int k = 0; k < N; ++k) {
            double ph = g.freqs[k] * y;
            E[static_cast<std::size_t>(j) * N + k] =
                (k == N / 2) ? cplx{std::cos(ph), 0.0} : cplx{std::cos(ph), std::sin(ph)};
        }
    }
    return E;
}

}  // namespace

Field rescale(const Field& u, double lambda, double alpha) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescale: lambda must be > 0");
    require_finite(u, "rescale");
    const Grid& g = *u.grid;
    const int N = g.N;
    const double amp = std::pow(lambda, alpha);
    FftEngine& eng = engine_for(g);
    std::vector<cplx> spec = eng.forward(u);
    Field out(u.grid);
    if (lambda == 1.0) {
        for (std::size_t i = 0; i < u.values.size(); ++i) out.values[i] = amp * u.values[i];
        return out;
    }
    std::vector<cplx> E = zoom_matrix(g, lambda);
    if (g.d == 1) {
        const double scale = amp / g.L;
        for (int j = 0; j < N; ++j) {
            cplx s{0.0, 0.0};
            const cplx* row = &E[static_cast<std::size_t>(j) * N];
            for (int k = 0; k < N; ++k) s += row[k] * spec[k];
            out.values[j] = scale * s;
        }
    } else {
        // Separable evaluation: contract axis 2, then axis 1.
        std::vector<cplx> tmp(g.size());
        for (int k1 = 0; k1 < N; ++k1) {
            const cplx* srow = &spec[g.index(k1, 0)];
            for (int j2 = 0; j2 < N; ++j2) {
                cplx s{0.0, 0.0};
                const cplx* row = &E[static_cast<std::size_t>(j2) * N];
                for (int k2 = 0; k2 < N; ++k2) s += row[k2] * srow[k2];
                tmp[static_cast<std::size_t>(k1) * N + j2] = s;
            }
        }
        const double scale = amp / (g.L * g.L);
        for (int j1 = 0; j1 < N; ++j1) {
            const cplx* row = &E[static_cast<std::size_t>(j1) * N];
            for (int j2 = 0; j2 < N; ++j2) {
                cplx s{0.0, 0.0};
                for (int k1 = 0; k1 < N; ++k1) s += row[k1] * tmp[static_cast<std::size_t>(k1) * N + j2];
                out.values[g.index(j1, j2)] = scale * s;
            }
        }
    }
    return out;
}

GNDiagnostics gn_diagnostics(const Field& u, const ModelParams& params, double r) {
    const double d = params.d;
    double rmax = (params.d == 1) ? std::numeric_limits<double>::infinity() : 1.0 + 2.0 / (d - 1.0);
    if (!(r > 1.0 && r < rmax)) throw std::invalid_argument("gn_diagnostics: r out of range");
    FunctionalReport f = functionals(u, params);
    if (!(f.mass_sq > 0.0) || !(f.kinetic > 0.0))
        throw std::invalid_argument("gn_diagnostics: need a nonzero field with T > 0");
    double lr = 0.0;
    for (const cplx& z : u.values) lr += std::pow(std::abs(z), r + 1.0);
    lr *= u.grid->cell_volume();
    GNDiagnostics out;
    out.r = r;
    out.quotient = lr / (std::pow(f.kinetic, d * (r - 1.0) / 2.0) *
                         std::pow(f.mass_sq, (r + 1.0) / 2.0 - d * (r - 1.0) / 2.0));
    out.theta = 2.0 * d * (params.p - params.q) /
                ((params.p + 1.0) * (2.0 * d - (d - 1.0) * (params.q + 1.0)));
    return out;
}

}  // namespace hwlab
