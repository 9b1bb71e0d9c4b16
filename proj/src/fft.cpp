#include "hwlab/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace hwlab {

namespace {
// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

FftEngine::FftEngine(const Grid& g) : d_(g.d), N_(g.N), n_(g.size()) {
    fscale_ = g.cell_volume();
    iscale_ = 1.0 / g.box_volume();
    buf_in_ = reinterpret_cast<cplx*>(fftw_alloc_complex(n_));
    buf_out_ = reinterpret_cast<cplx*>(fftw_alloc_complex(n_));
    if (!buf_in_ || !buf_out_) throw std::bad_alloc();
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* in = reinterpret_cast<fftw_complex*>(buf_in_);
    auto* out = reinterpret_cast<fftw_complex*>(buf_out_);
    if (d_ == 1) {
        fwd_ = fftw_plan_dft_1d(N_, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(N_, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        fwd_ = fftw_plan_dft_2d(N_, N_, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(N_, N_, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!fwd_ || !bwd_) throw std::runtime_error("FftEngine: fftw plan creation failed");
}

FftEngine::~FftEngine() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
    fftw_free(buf_in_);
    fftw_free(buf_out_);
}

void FftEngine::forward(const std::vector<cplx>& in, std::vector<cplx>& out) {
    if (in.size() != n_) throw std::invalid_argument("FftEngine::forward: size mismatch");
    std::memcpy(buf_in_, in.data(), n_ * sizeof(cplx));
    fftw_execute(static_cast<fftw_plan>(fwd_));
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = fscale_ * buf_out_[i];
}

void FftEngine::inverse(const std::vector<cplx>& in, std::vector<cplx>& out) {
    if (in.size() != n_) throw std::invalid_argument("FftEngine::inverse: size mismatch");
    std::memcpy(buf_in_, in.data(), n_ * sizeof(cplx));
    fftw_execute(static_cast<fftw_plan>(bwd_));
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = iscale_ * buf_out_[i];
}

std::vector<cplx> FftEngine::forward(const Field& u) {
    std::vector<cplx> spec;
    forward(u.values, spec);
    return spec;
}

void FftEngine::inverse_into(const std::vector<cplx>& spec, Field& out) {
    inverse(spec, out.values);
}

FftEngine& engine_for(const Grid& g) {
    using Key = std::tuple<int, int, double>;
    thread_local std::map<Key, std::unique_ptr<FftEngine>> cache;
    Key key{g.d, g.N, g.L};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<FftEngine>(g)).first;
    return *it->second;
}

}  // namespace hwlab
