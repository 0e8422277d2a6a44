#pragma once

#include <cstdint>
#include <vector>

namespace palsim {

// Bipartite graph on U (left) and Z (right), adjacency stored per U-vertex
// as sorted Z-indices. t[v], when used, is the number of right-neighbors
// sampled at v.
struct Bigraph {
    int nu = 0;
    int nz = 0;
    std::vector<std::vector<int>> adj;  // per U-vertex, sorted
    std::vector<int> t;                 // optional sample sizes, may be empty

    static Bigraph empty(int nu, int nz);
    bool has_edge(int u, int z) const;
    int degree(int u) const { return static_cast<int>(adj[u].size()); }
    std::vector<int> z_neighborhood(int z) const;  // U-side view
    std::size_t edge_count() const;
};

// Replaces N(beta), N(gamma) by their union and intersection (in that
// order). Edge count and all U-degrees are preserved.
Bigraph switch_pair(const Bigraph& b, int beta, int gamma);

// The nested bigraph in which U-vertex v is adjacent to the first
// degrees[v] vertices of Z.
Bigraph canonicalize_nested(int nz, const std::vector<int>& degrees);

// Maximum matching via Hopcroft-Karp. Returns pair (size, match_u) where
// match_u[u] is the matched Z-vertex or -1.
std::pair<int, std::vector<int>> max_matching(const Bigraph& b);

struct HallReport {
    int deficiency = 0;              // min over Q of |N(Q)| - |Q| (Q may be empty)
    std::vector<int> witness;        // an argmin Q (subset of U)
};

// Exhaustive over subsets when |U| <= exhaustive_limit, else derived from
// the matching defect (witness built from alternating reachability).
HallReport hall_check(const Bigraph& b, int exhaustive_limit = 22);

// Exact probability that the random sublist graph L (N_L(v) uniform
// t[v]-subset of N_B(v), independent) contains a U-perfect matching.
// Enumerates all choices; meant for tiny instances. Returns {num, den}.
std::pair<std::uint64_t, std::uint64_t> pm_probability_exact(const Bigraph& b);

// Given matchings m0 (over A subset of U) and m1 (U-perfect), both as
// match_u arrays into a common bigraph, returns a U-perfect matching using
// every Z-vertex that m0 uses.
std::vector<int> combine_matchings(const Bigraph& b, const std::vector<int>& m0,
                                   const std::vector<int>& m1);

}  // namespace palsim
