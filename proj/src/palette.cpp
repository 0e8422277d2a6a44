#include "palsim/palette.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "palsim/rng.hpp"

namespace palsim {

bool PaletteSystem::in_S(Vertex v, Color c) const {
    return std::binary_search(S[v].begin(), S[v].end(), c);
}

bool ListSample::in_L(Vertex v, Color c) const {
    return std::binary_search(L[v].begin(), L[v].end(), c);
}

PaletteSystem make_palette(const Graph& g, PaletteMode mode, int gamma_size,
                           std::uint64_t seed) {
    const int d = g.max_degree_bound();
    const int width = d + 1;
    if (gamma_size < width)
        throw GraphError("gamma_size must be at least D+1");

    PaletteSystem p;
    p.degree = d;
    p.S.resize(g.n());

    switch (mode) {
        case PaletteMode::Identical: {
            std::vector<Color> base(width);
            std::iota(base.begin(), base.end(), 0);
            for (auto& s : p.S) s = base;
            gamma_size = width;
            break;
        }
        case PaletteMode::Windows: {
            const int starts = gamma_size - d;  // window start positions
            for (Vertex v = 0; v < g.n(); ++v) {
                const int start = v % starts;
                p.S[v].resize(width);
                std::iota(p.S[v].begin(), p.S[v].end(), start);
            }
            break;
        }
        case PaletteMode::RandomWide: {
            std::vector<Color> pool(gamma_size);
            for (Vertex v = 0; v < g.n(); ++v) {
                std::iota(pool.begin(), pool.end(), 0);
                Rng rng(mix64(seed, 0xba5e11ULL, static_cast<std::uint64_t>(v)));
                p.S[v] = rng.sample_subset(pool, width);
                std::sort(p.S[v].begin(), p.S[v].end());
            }
            break;
        }
    }

    // compact ids so that Gamma is exactly the union of the lists
    std::vector<char> used(gamma_size, 0);
    for (const auto& s : p.S)
        for (Color c : s) used[c] = 1;
    std::vector<Color> remap(gamma_size, -1);
    Color next = 0;
    for (Color c = 0; c < gamma_size; ++c)
        if (used[c]) remap[c] = next++;
    if (next != gamma_size)
        for (auto& s : p.S)
            for (Color& c : s) c = remap[c];
    p.gamma_size = next;
    return p;
}

ListSample sample_lists(const PaletteSystem& p, int ell, std::uint64_t seed,
                        const std::vector<std::vector<Color>>* restriction) {
    ListSample ls;
    ls.ell = ell;
    ls.seed = seed;
    ls.L.resize(p.S.size());
    for (Vertex v = 0; v < static_cast<int>(p.S.size()); ++v) {
        const std::vector<Color>& base = restriction ? (*restriction)[v] : p.S[v];
        if (ell > static_cast<int>(base.size()))
            throw GraphError("list size " + std::to_string(ell) +
                             " exceeds base list at vertex " + std::to_string(v));
        std::vector<Color> pool = base;
        Rng rng(mix64(seed, 0x115457ULL, static_cast<std::uint64_t>(v)));
        ls.L[v] = rng.sample_subset(pool, ell);
        std::sort(ls.L[v].begin(), ls.L[v].end());
    }
    return ls;
}

int color_degree_S(const Graph& g, const PaletteSystem& p, Vertex v, Color gamma) {
    int count = 0;
    for (Vertex w : g.neighbors(v))
        if (p.in_S(w, gamma)) ++count;
    return count;
}

int color_degree_L(const Graph& g, const ListSample& ls, Vertex v, Color gamma) {
    int count = 0;
    for (Vertex w : g.neighbors(v))
        if (ls.in_L(w, gamma)) ++count;
    return count;
}

void write_palette(std::ostream& os, const PaletteSystem& p) {
    os << p.S.size() << ' ' << p.gamma_size << ' ' << p.degree << '\n';
    for (std::size_t v = 0; v < p.S.size(); ++v) {
        os << v << ':';
        for (Color c : p.S[v]) os << ' ' << c;
        os << '\n';
    }
}

void write_lists(std::ostream& os, const ListSample& ls) {
    os << ls.L.size() << ' ' << ls.ell << ' ' << ls.seed << '\n';
    for (std::size_t v = 0; v < ls.L.size(); ++v) {
        os << v << ':';
        for (Color c : ls.L[v]) os << ' ' << c;
        os << '\n';
    }
}

void Params::derive() {
    theta = std::exp(-9.0 / delta);
    rho = delta / 10.0;
    nu0 = rho / 2.0;
    vartheta = eps * eps / 2.0;
    vartheta_prime = std::exp(-3.0) * eps * eps / 8.0;
}

Params Params::make(double delta, double eps) {
    Params p;
    p.delta = delta;
    p.eps = eps;
    p.derive();
    return p;
}

double Params::zeta0(int degree) const {
    return std::sqrt(eps) / static_cast<double>(degree);
}

double Params::popular_threshold(int degree) const {
    return static_cast<double>(degree) / (1.0 + rho);
}

}  // namespace palsim
