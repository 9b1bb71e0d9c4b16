#include "hwlab/grid.hpp"

#include <cmath>
#include <numbers>

#include "hwlab/field.hpp"

namespace hwlab {

std::shared_ptr<const Grid> make_grid(const ModelParams& params) {
    params.validate();
    auto g = std::make_shared<Grid>();
    g->d = params.d;
    g->N = params.N;
    g->L = params.L;
    g->h = params.L / params.N;
    g->nodes.resize(params.N);
    g->freqs.resize(params.N);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < params.N; ++j) {
        g->nodes[j] = -0.5 * params.L + j * g->h;
        int kt = (j < params.N / 2) ? j : j - params.N;
        g->freqs[j] = two_pi * kt / params.L;
    }
    return g;
}

Field field_from(std::shared_ptr<const Grid> g, const std::function<cplx(double)>& f) {
    if (g->d != 1) throw std::invalid_argument("field_from: 1D sampler on non-1D grid");
    Field u(std::move(g));
    for (int j = 0; j < u.grid->N; ++j) u.values[j] = f(u.grid->nodes[j]);
    return u;
}

Field field_from(std::shared_ptr<const Grid> g, const std::function<cplx(double, double)>& f) {
    if (g->d != 2) throw std::invalid_argument("field_from: 2D sampler on non-2D grid");
    Field u(std::move(g));
    const Grid& gr = *u.grid;
    for (int j1 = 0; j1 < gr.N; ++j1)
        for (int j2 = 0; j2 < gr.N; ++j2)
            u.values[gr.index(j1, j2)] = f(gr.nodes[j1], gr.nodes[j2]);
    return u;
}

Field gaussian_field(std::shared_ptr<const Grid> g, double width) {
    const double w2 = 2.0 * width * width;
    if (g->d == 1)
        return field_from(std::move(g), std::function<cplx(double)>([w2](double x) {
                              return cplx{std::exp(-x * x / w2), 0.0};
                          }));
    return field_from(std::move(g), std::function<cplx(double, double)>([w2](double x, double y) {
                          return cplx{std::exp(-(x * x + y * y) / w2), 0.0};
                      }));
}

}  // namespace hwlab
