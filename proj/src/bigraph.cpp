#include "palsim/bigraph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace palsim {

Bigraph Bigraph::empty(int nu, int nz) {
    Bigraph b;
    b.nu = nu;
    b.nz = nz;
    b.adj.resize(nu);
    return b;
}

bool Bigraph::has_edge(int u, int z) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), z);
}

std::vector<int> Bigraph::z_neighborhood(int z) const {
    std::vector<int> out;
    for (int u = 0; u < nu; ++u)
        if (has_edge(u, z)) out.push_back(u);
    return out;
}

std::size_t Bigraph::edge_count() const {
    std::size_t m = 0;
    for (const auto& a : adj) m += a.size();
    return m;
}

Bigraph switch_pair(const Bigraph& b, int beta, int gamma) {
    if (beta == gamma) throw std::invalid_argument("switch needs beta != gamma");
    if (beta < 0 || gamma < 0 || beta >= b.nz || gamma >= b.nz)
        throw std::invalid_argument("switch: color index out of range");
    Bigraph out = b;
    for (int u = 0; u < b.nu; ++u) {
        const bool in_beta = b.has_edge(u, beta);
        const bool in_gamma = b.has_edge(u, gamma);
        if (in_beta == in_gamma) continue;  // union/intersection unchanged
        auto& a = out.adj[u];
        if (in_gamma) {
            // u moves from N(gamma) to N(beta)
            a.erase(std::lower_bound(a.begin(), a.end(), gamma));
            a.insert(std::lower_bound(a.begin(), a.end(), beta), beta);
        }
        // in_beta && !in_gamma: u stays exactly in the union side
    }
    return out;
}

Bigraph canonicalize_nested(int nz, const std::vector<int>& degrees) {
    Bigraph b = Bigraph::empty(static_cast<int>(degrees.size()), nz);
    for (std::size_t u = 0; u < degrees.size(); ++u) {
        if (degrees[u] < 0 || degrees[u] > nz)
            throw std::invalid_argument("infeasible degree in canonicalize_nested");
        b.adj[u].resize(degrees[u]);
        std::iota(b.adj[u].begin(), b.adj[u].end(), 0);
    }
    return b;
}

std::pair<int, std::vector<int>> max_matching(const Bigraph& b) {
    // Hopcroft-Karp: layered BFS + DFS augmentation.
    const int INF = INT32_MAX;
    std::vector<int> match_u(b.nu, -1), match_z(b.nz, -1), dist(b.nu);

    auto bfs = [&]() {
        std::queue<int> q;
        bool found = false;
        for (int u = 0; u < b.nu; ++u) {
            if (match_u[u] == -1) {
                dist[u] = 0;
                q.push(u);
            } else {
                dist[u] = INF;
            }
        }
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int z : b.adj[u]) {
                int w = match_z[z];
                if (w == -1) {
                    found = true;
                } else if (dist[w] == INF) {
                    dist[w] = dist[u] + 1;
                    q.push(w);
                }
            }
        }
        return found;
    };

    std::function<bool(int)> dfs = [&](int u) -> bool {
        for (int z : b.adj[u]) {
            int w = match_z[z];
            if (w == -1 || (dist[w] == dist[u] + 1 && dfs(w))) {
                match_u[u] = z;
                match_z[z] = u;
                return true;
            }
        }
        dist[u] = INF;
        return false;
    };

    int size = 0;
    while (bfs())
        for (int u = 0; u < b.nu; ++u)
            if (match_u[u] == -1 && dfs(u)) ++size;
    return {size, match_u};
}

HallReport hall_check(const Bigraph& b, int exhaustive_limit) {
    HallReport report;
    if (b.nu <= exhaustive_limit && b.nu <= 22) {
        int best_def = 0;  // Q = empty set
        std::uint32_t best_q = 0;
        std::vector<std::uint64_t> nbmask(b.nu, 0);
        for (int u = 0; u < b.nu; ++u)
            for (int z : b.adj[u]) nbmask[u] |= (1ULL << z);
        if (b.nz > 63) {
            // fall through to matching-based mode for wide Z
        } else {
            for (std::uint32_t q = 1; q < (1u << b.nu); ++q) {
                std::uint64_t nb = 0;
                int size = 0;
                for (int u = 0; u < b.nu; ++u)
                    if (q & (1u << u)) {
                        nb |= nbmask[u];
                        ++size;
                    }
                const int def = __builtin_popcountll(nb) - size;
                if (def < best_def) {
                    best_def = def;
                    best_q = q;
                }
            }
            report.deficiency = best_def;
            for (int u = 0; u < b.nu; ++u)
                if (best_q & (1u << u)) report.witness.push_back(u);
            return report;
        }
    }

    // Matching-based: deficiency = matching size - |U|; witness = U-side
    // vertices reachable by alternating paths from the unmatched ones.
    auto [size, match_u] = max_matching(b);
    report.deficiency = size - b.nu;
    if (size == b.nu) return report;  // witness: empty set, deficiency 0

    std::vector<int> match_z(b.nz, -1);
    for (int u = 0; u < b.nu; ++u)
        if (match_u[u] != -1) match_z[match_u[u]] = u;
    std::vector<char> seen_u(b.nu, 0), seen_z(b.nz, 0);
    std::queue<int> q;
    for (int u = 0; u < b.nu; ++u)
        if (match_u[u] == -1) {
            seen_u[u] = 1;
            q.push(u);
        }
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int z : b.adj[u]) {
            if (seen_z[z]) continue;
            seen_z[z] = 1;
            int w = match_z[z];
            if (w != -1 && !seen_u[w]) {
                seen_u[w] = 1;
                q.push(w);
            }
        }
    }
    for (int u = 0; u < b.nu; ++u)
        if (seen_u[u]) report.witness.push_back(u);
    return report;
}

namespace {

bool mask_has_pm(const std::vector<std::uint32_t>& masks) {
    // Hall over all subsets (|U| small).
    const int n = static_cast<int>(masks.size());
    for (std::uint32_t q = 1; q < (1u << n); ++q) {
        std::uint32_t nb = 0;
        for (int u = 0; u < n; ++u)
            if (q & (1u << u)) nb |= masks[u];
        if (__builtin_popcount(nb) < __builtin_popcount(q)) return false;
    }
    return true;
}

void enumerate_subsets(const std::vector<int>& pool, int k, int start,
                       std::uint32_t acc, std::vector<std::uint32_t>& out) {
    if (k == 0) {
        out.push_back(acc);
        return;
    }
    for (int i = start; i + k <= static_cast<int>(pool.size()); ++i)
        enumerate_subsets(pool, k - 1, i + 1, acc | (1u << pool[i]), out);
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> pm_probability_exact(const Bigraph& b) {
    if (b.nu > 6 || b.nz > 20)
        throw std::invalid_argument("pm_probability_exact: instance too large");
    if (b.t.size() != static_cast<std::size_t>(b.nu))
        throw std::invalid_argument("pm_probability_exact: t sizes required");

    std::vector<std::vector<std::uint32_t>> choices(b.nu);
    for (int u = 0; u < b.nu; ++u) {
        if (b.t[u] > b.degree(u))
            throw std::invalid_argument("pm_probability_exact: t exceeds degree");
        enumerate_subsets(b.adj[u], b.t[u], 0, 0, choices[u]);
    }

    std::uint64_t total = 1, good = 0;
    for (int u = 0; u < b.nu; ++u) total *= choices[u].size();

    std::vector<std::uint32_t> current(b.nu);
    std::vector<std::size_t> idx(b.nu, 0);
    while (true) {
        for (int u = 0; u < b.nu; ++u) current[u] = choices[u][idx[u]];
        if (mask_has_pm(current)) ++good;
        int pos = b.nu - 1;
        while (pos >= 0 && ++idx[pos] == choices[pos].size()) {
            idx[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return {good, total};
}

std::vector<int> combine_matchings(const Bigraph& b, const std::vector<int>& m0,
                                   const std::vector<int>& m1) {
    std::vector<int> match_u = m1;
    std::vector<int> match_z(b.nz, -1);
    for (int u = 0; u < b.nu; ++u)
        if (match_u[u] != -1) match_z[match_u[u]] = u;
    std::vector<int> m0_z(b.nz, -1);
    for (int u = 0; u < b.nu; ++u)
        if (m0[u] != -1) m0_z[m0[u]] = u;

    // For each Z-vertex used by m0 but not by the current matching, walk the
    // alternating m0/current path from it and flip. The path ends at a
    // Z-vertex outside m0, so previously covered m0-vertices stay covered.
    for (int z0 = 0; z0 < b.nz; ++z0) {
        if (m0_z[z0] == -1 || match_z[z0] != -1) continue;
        int z = z0;
        while (true) {
            const int u = m0_z[z];           // m0-edge (u, z), u covered by m1
            const int znext = match_u[u];    // current edge at u
            match_u[u] = z;
            match_z[z] = u;
            if (znext == -1) break;  // should not happen: m1 is U-perfect
            z = znext;
            if (m0_z[z] == -1) {  // path ends: z leaves the matching
                match_z[z] = -1;
                break;
            }
            match_z[z] = -1;  // will be re-matched in the next loop round
        }
    }
    return match_u;
}

}  // namespace palsim
