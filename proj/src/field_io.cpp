#include "hwlab/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hwlab {

namespace {
constexpr char kMagic[4] = {'H', 'W', 'F', '1'};

template <class T>
void write_raw(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::ifstream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("field read: truncated file");
    return v;
}
}  // namespace

void save_field(const Field& u, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_field: cannot open " + path.string());
    os.write(kMagic, 4);
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid->d));
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid->N));
    write_raw<double>(os, u.grid->L);
    for (const cplx& z : u.values) {
        write_raw<double>(os, z.real());
        write_raw<double>(os, z.imag());
    }
    if (!os) throw std::runtime_error("save_field: write failed for " + path.string());
}

Field load_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_field: unknown magic in " + path.string());
    auto d = read_raw<std::uint32_t>(is);
    auto N = read_raw<std::uint32_t>(is);
    auto L = read_raw<double>(is);
    ModelParams params;
    params.d = static_cast<int>(d);
    params.N = static_cast<int>(N);
    params.L = L;
    // Grid geometry only; exponents are irrelevant here but must validate.
    Field u(make_grid(params));
    for (cplx& z : u.values) {
        double re = read_raw<double>(is);
        double im = read_raw<double>(is);
        z = cplx{re, im};
    }
    return u;
}

void export_field_csv(const Field& u, const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw std::runtime_error("export_field_csv: cannot open " + path.string());
    const Grid& g = *u.grid;
    if (g.d == 1) {
        std::fprintf(f, "x,re,im,abs\n");
        for (int j = 0; j < g.N; ++j) {
            const cplx& z = u.values[j];
            std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", g.nodes[j], z.real(), z.imag(),
                         std::abs(z));
        }
    } else {
        std::fprintf(f, "x,y,re,im,abs\n");
        for (int j1 = 0; j1 < g.N; ++j1)
            for (int j2 = 0; j2 < g.N; ++j2) {
                const cplx& z = u.values[g.index(j1, j2)];
                std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.nodes[j1], g.nodes[j2],
                             z.real(), z.imag(), std::abs(z));
            }
    }
    std::fclose(f);
}

}  // namespace hwlab
