#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hwlab {

// Problem definition: i psi_t = sqrt(-Laplace) psi + |psi|^{q-1} psi - |psi|^{p-1} psi
// on a periodic box of side L with N points per axis.  The q-power is the
// defocusing term, the p-power the focusing one, 1 < q < p < 1 + 2/d.
// The boost velocity v tilts the kinetic symbol to |xi| - v.xi and requires
// |v| < 1 so the symbol stays nonnegative.
struct ModelParams {
    double q = 1.5;
    double p = 1.8;
    std::array<double, 2> v{0.0, 0.0};  // only the first d entries are used
    int d = 1;
    double L = 80.0;
    int N = 1024;

    double vnorm() const;
    void validate() const;  // throws std::invalid_argument
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline double ModelParams::vnorm() const {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += v[a] * v[a];
    return std::sqrt(s);
}

inline void ModelParams::validate() const {
    if (d != 1 && d != 2) throw std::invalid_argument("ModelParams: d must be 1 or 2");
    if (!(1.0 < q && q < p && p < 1.0 + 2.0 / d))
        throw std::invalid_argument("ModelParams: need 1 < q < p < 1 + 2/d");
    if (!(vnorm() < 1.0)) throw std::invalid_argument("ModelParams: need |v| < 1");
    if (!(L > 0.0)) throw std::invalid_argument("ModelParams: need L > 0");
    if (!is_power_of_two(N)) throw std::invalid_argument("ModelParams: N must be a power of two");
}

}  // namespace hwlab
