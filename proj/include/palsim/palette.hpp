#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "palsim/graph.hpp"

namespace palsim {

using Color = int;

enum class PaletteMode { Identical, Windows, RandomWide };

// Color universe plus per-vertex base lists S_v, each of size D+1.
// Color ids are dense: every id in [0, gamma_size) occurs in some S_v.
struct PaletteSystem {
    int gamma_size = 0;
    int degree = 0;                       // D; |S_v| == D+1
    std::vector<std::vector<Color>> S;    // sorted per vertex

    int list_size() const { return degree + 1; }
    bool in_S(Vertex v, Color c) const;
};

// Per-vertex sampled sublists L_v, each of size ell, L_v subset of S_v.
struct ListSample {
    int ell = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<Color>> L;  // sorted per vertex

    bool in_L(Vertex v, Color c) const;
};

// identical: S_v = {0..D} for all v (gamma_size must be D+1).
// windows:   S_v a width-(D+1) window starting at v mod (gamma_size - D).
// random-wide: S_v a uniform (D+1)-subset of [0, gamma_size), independent.
// Unused color ids are compacted away so ids stay dense.
PaletteSystem make_palette(const Graph& g, PaletteMode mode, int gamma_size,
                           std::uint64_t seed);

// Independent uniform ell-subsets of S_v (or of restriction[v] when given).
// Deterministic per seed; per-vertex streams are independent.
ListSample sample_lists(const PaletteSystem& p, int ell, std::uint64_t seed,
                        const std::vector<std::vector<Color>>* restriction = nullptr);

// d_gamma(v) over base lists: |{w ~ v : gamma in S_w}|.
int color_degree_S(const Graph& g, const PaletteSystem& p, Vertex v, Color gamma);
// d_gamma(v) over sampled lists: |{w ~ v : gamma in L_w}|.
int color_degree_L(const Graph& g, const ListSample& ls, Vertex v, Color gamma);

// Text formats: palette header "n gamma_size D", sample header adds "ell seed";
// then one line "v: c0 c1 ..." per vertex.
void write_palette(std::ostream& os, const PaletteSystem& p);
void write_lists(std::ostream& os, const ListSample& ls);

// Global parameter pack. Derived fields are recomputed by derive(), never
// stored stale.
struct Params {
    double delta = 1.0;
    double eps = 0.1;
    double b_const = 7.0;    // cluster-shape constant
    double target_tol = 0.2; // tolerance for the e^{-1}D neighborhood target

    // derived
    double theta = 0.0;           // e^{-9/delta}
    double rho = 0.0;             // delta/10
    double nu0 = 0.0;             // rho/2
    double vartheta = 0.0;        // eps^2/2
    double vartheta_prime = 0.0;  // e^{-3} eps^2 / 8

    void derive();
    static Params make(double delta, double eps);

    // zeta benchmark for a given degree: sqrt(eps)/D
    double zeta0(int degree) const;
    // b = D/(1+rho)
    double popular_threshold(int degree) const;
};

}  // namespace palsim
