#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hwlab/grid.hpp"

namespace hwlab {

using cplx = std::complex<double>;

// Complex lattice function bound to a Grid.  Value semantics; operations in
// spectral.hpp treat fields as immutable inputs.
struct Field {
    std::shared_ptr<const Grid> grid;
    std::vector<cplx> values;

    Field() = default;
    explicit Field(std::shared_ptr<const Grid> g)
        : grid(std::move(g)), values(grid->size(), cplx{0.0, 0.0}) {}

    std::size_t size() const { return values.size(); }
};

inline bool same_grid(const Field& a, const Field& b) {
    if (a.grid == b.grid) return true;
    if (!a.grid || !b.grid) return false;
    return a.grid->d == b.grid->d && a.grid->N == b.grid->N && a.grid->L == b.grid->L;
}

inline bool all_finite(const Field& u) {
    for (const cplx& z : u.values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

inline void require_finite(const Field& u, const char* who) {
    if (!all_finite(u)) throw std::invalid_argument(std::string(who) + ": non-finite field");
}

// Sample a function of the node coordinates.  1D overload takes x, the 2D
// overload takes (x, y).
Field field_from(std::shared_ptr<const Grid> g, const std::function<cplx(double)>& f);
Field field_from(std::shared_ptr<const Grid> g, const std::function<cplx(double, double)>& f);

// Centered Gaussian exp(-x^2 / (2 w^2)) (isotropic in 2D), unit amplitude.
Field gaussian_field(std::shared_ptr<const Grid> g, double width);

inline Field operator*(double a, const Field& u) {
    Field r = u;
    for (cplx& z : r.values) z *= a;
    return r;
}

inline Field operator+(const Field& a, const Field& b) {
    Field r = a;
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] += b.values[i];
    return r;
}

inline Field operator-(const Field& a, const Field& b) {
    Field r = a;
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= b.values[i];
    return r;
}

}  // namespace hwlab
