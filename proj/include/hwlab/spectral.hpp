#pragma once

#include "hwlab/fft.hpp"
#include "hwlab/field.hpp"
#include "hwlab/model.hpp"

namespace hwlab {

// Mass, kinetic and potential terms, energy, Pohozaev functional, momentum,
// Lagrange multiplier and H^{1/2} norm of a single field.
struct FunctionalReport {
    double mass_sq = 0.0;   // ||u||_2^2
    double kinetic = 0.0;   // T_v(u) = sum m(xi)|uhat|^2 / L^d
    double lq = 0.0;        // ||u||_{q+1}^{q+1}
    double lp = 0.0;        // ||u||_{p+1}^{p+1}
    double energy = 0.0;    // E_v = kinetic/2 + lq/(q+1) - lp/(p+1)
    double pohozaev = 0.0;  // G_v = kinetic + d(q-1)/(q+1) lq - d(p-1)/(p+1) lp
    double momentum = 0.0;  // P = -int i conj(u) u_x (d = 1 only, else 0)
    double omega = 0.0;     // -(T_v + lq - lp)/mass_sq, 0 for the zero field
    double hhalf_sq = 0.0;  // sum (1+|xi|^2)^{1/2} |uhat|^2 / L^d
};

struct GNDiagnostics {
    double r = 0.0;
    double quotient = 0.0;  // lr / (T^{d(r-1)/2} M^{(r+1)/2 - d(r-1)/2})
    double theta = 0.0;     // 2d(p-q) / ((p+1)(2d - (d-1)(q+1)))
};

// Kinetic symbol m(xi) = |xi| - v.xi at the wrapped multi-index (k1[,k2]).
double symbol_value(const Grid& g, const ModelParams& params, int k1, int k2 = 0);

// (sqrt(-Laplace) + i v.grad) u as the Fourier multiplier m(xi); annihilates
// the zero mode, linear, self-adjoint.
Field apply_symbol(const Field& u, const ModelParams& params);

FunctionalReport functionals(const Field& u, const ModelParams& params);

double mass_sq(const Field& u);
double l2_norm(const Field& u);
cplx l2_inner(const Field& a, const Field& b);  // sum conj(a) b h^d
double hhalf_norm_sq(const Field& u);

// u_lambda(x) = lambda^alpha u(lambda x) by evaluating the band-limited
// interpolant of u at the dilated nodes (Nyquist mode symmetrized).  The
// caller is responsible for lambda * support fitting the torus.
Field rescale(const Field& u, double lambda, double alpha);

GNDiagnostics gn_diagnostics(const Field& u, const ModelParams& params, double r);

}  // namespace hwlab
