#pragma once

#include <complex>
#include <vector>

#include "hwlab/field.hpp"

namespace hwlab {

// FFTW wrapper with the quadrature-weighted transform convention:
//   forward:  uhat_k = h^d sum_j u_j e^{-i 2pi j.k / N}
//   inverse:  u_j    = (1/L^d) sum_k uhat_k e^{+i 2pi j.k / N}
// so that discrete Plancherel reads  sum_j |u_j|^2 h^d = sum_k |uhat_k|^2 / L^d
// and the spectral functionals below mirror the continuum formulas literally.
// One engine per grid; engines are not thread-safe, use engine_for() which
// hands out a thread-local instance.
class FftEngine {
  public:
    explicit FftEngine(const Grid& g);
    ~FftEngine();
    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    void forward(const std::vector<cplx>& in, std::vector<cplx>& out);
    void inverse(const std::vector<cplx>& in, std::vector<cplx>& out);

    std::vector<cplx> forward(const Field& u);
    // Inverse of a spectrum onto the engine's grid.
    void inverse_into(const std::vector<cplx>& spec, Field& out);

  private:
    int d_, N_;
    std::size_t n_;
    double fscale_, iscale_;
    void* fwd_ = nullptr;  // fftw_plan
    void* bwd_ = nullptr;
    cplx* buf_in_ = nullptr;
    cplx* buf_out_ = nullptr;
};

// Thread-local engine cache keyed by (d, N, L).
FftEngine& engine_for(const Grid& g);

}  // namespace hwlab
