#pragma once

// Test-only oracles, independent of the library's sampling paths: exact
// retention probabilities by full enumeration, exact binomial tails, and
// exhaustive Janson enumeration.

#include <cstdint>
#include <vector>

#include "palsim/bounds.hpp"
#include "palsim/graph.hpp"
#include "palsim/palette.hpp"

namespace palsim::oracles {

// P(v in T) for every vertex by exhausting tau profiles; the xi coin is
// integrated analytically. Inner loop in int64 (weights are
// D^e (D+1)^{n+D-n-e} over a common denominator), one rational division
// per vertex at the end.
inline std::vector<Rational> retention_all_exact(const Graph& g,
                                                 const PaletteSystem& p) {
    const int n = g.n();
    const int d = p.degree;
    std::vector<std::int64_t> dpow(d + 1), d1pow(d + 1);
    dpow[0] = d1pow[0] = 1;
    for (int i = 1; i <= d; ++i) {
        dpow[i] = dpow[i - 1] * d;
        d1pow[i] = d1pow[i - 1] * (d + 1);
    }

    std::vector<std::int64_t> acc(n, 0);
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        for (Vertex v = 0; v < n; ++v) {
            const Color cv = p.S[v][idx[v]];
            bool proper = true;
            int d_gamma = 0;
            for (Vertex w : g.neighbors(v)) {
                if (p.S[w][idx[w]] == cv) {
                    proper = false;
                    break;
                }
            }
            if (!proper) continue;
            for (Vertex w : g.neighbors(v))
                for (Color c : p.S[w])
                    if (c == cv) {
                        ++d_gamma;
                        break;
                    }
            acc[v] += dpow[d - d_gamma] * d1pow[d_gamma];
        }
        int pos = n - 1;
        while (pos >= 0 && ++idx[pos] == p.S[pos].size()) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }

    // common denominator: (prod |S_u|) * (D+1)^D
    Rational denom = 1;
    for (Vertex u = 0; u < n; ++u) denom *= static_cast<int>(p.S[u].size());
    for (int i = 0; i < d; ++i) denom *= (d + 1);
    std::vector<Rational> out(n);
    for (Vertex v = 0; v < n; ++v) out[v] = Rational(acc[v]) / denom;
    return out;
}

inline Rational zhat_power(int d) {
    Rational r = 1;
    for (int i = 0; i < d; ++i) r *= Rational(d, d + 1);
    return r;
}

inline Rational binom(int n, int k) {
    Rational r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

inline Rational binomial_upper_tail(int n, const Rational& p, int k) {
    Rational total = 0;
    for (int j = std::max(k, 0); j <= n; ++j) {
        Rational term = binom(n, j);
        for (int i = 0; i < j; ++i) term *= p;
        for (int i = 0; i < n - j; ++i) term *= (1 - p);
        total += term;
    }
    return total;
}

inline Rational binomial_lower_tail(int n, const Rational& p, int k) {
    Rational total = 0;
    for (int j = 0; j <= std::min(k, n); ++j) {
        Rational term = binom(n, j);
        for (int i = 0; i < j; ++i) term *= p;
        for (int i = 0; i < n - j; ++i) term *= (1 - p);
        total += term;
    }
    return total;
}

// P(no E_i) over all subsets of the ground set
inline Rational janson_exact(const std::vector<std::vector<int>>& sets,
                             int ground, const Rational& p) {
    std::vector<Rational> ppow(ground + 1), qpow(ground + 1);
    ppow[0] = qpow[0] = 1;
    for (int i = 1; i <= ground; ++i) {
        ppow[i] = ppow[i - 1] * p;
        qpow[i] = qpow[i - 1] * (1 - p);
    }
    std::vector<std::uint32_t> masks;
    for (const auto& a : sets) {
        std::uint32_t m = 0;
        for (int e : a) m |= 1u << e;
        masks.push_back(m);
    }
    Rational total = 0;
    for (std::uint32_t mask = 0; mask < (1u << ground); ++mask) {
        bool any = false;
        for (std::uint32_t am : masks)
            if ((mask & am) == am) {
                any = true;
                break;
            }
        if (any) continue;
        const int ones = __builtin_popcount(mask);
        total += ppow[ones] * qpow[ground - ones];
    }
    return total;
}

}  // namespace palsim::oracles
