#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "hwlab/model.hpp"

namespace hwlab {

// Uniform periodic lattice.  Nodes per axis: x_j = -L/2 + j L/N.
// Frequencies per axis in FFTW wrapped order: xi_k = 2 pi ktilde / L with
// ktilde = k for k < N/2 and k - N otherwise, so the single Nyquist mode
// sits at ktilde = -N/2.  Quadrature weight is the uniform cell volume h^d.
struct Grid {
    int d = 1;
    int N = 0;
    double L = 0.0;
    double h = 0.0;
    std::vector<double> nodes;  // size N, one axis (axes are identical)
    std::vector<double> freqs;  // size N, wrapped order

    std::size_t size() const {
        std::size_t n = static_cast<std::size_t>(N);
        return d == 1 ? n : n * n;
    }
    double cell_volume() const { return d == 1 ? h : h * h; }
    double box_volume() const { return d == 1 ? L : L * L; }

    // Row-major flattening for d = 2: index = j1*N + j2.
    std::size_t index(int j1, int j2) const {
        return static_cast<std::size_t>(j1) * N + j2;
    }
};

std::shared_ptr<const Grid> make_grid(const ModelParams& params);

}  // namespace hwlab
