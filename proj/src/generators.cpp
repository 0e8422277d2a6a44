#include "palsim/generators.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "palsim/rng.hpp"

namespace palsim {

namespace {

std::uint64_t edge_key(Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Random simple graph with the given degree sequence: random pairing of
// half-edges, then bounded edge-swap repair of loops and duplicates.
// `forbidden` are pre-existing edges the result must not duplicate.
std::vector<std::pair<Vertex, Vertex>> pair_degree_sequence(
    const std::vector<int>& deg, Rng& rng,
    const std::unordered_set<std::uint64_t>& forbidden) {
    const int n = static_cast<int>(deg.size());
    std::vector<Vertex> stubs;
    for (Vertex v = 0; v < n; ++v)
        for (int i = 0; i < deg[v]; ++i) stubs.push_back(v);
    if (stubs.size() % 2 != 0) throw GraphError("degree sequence has odd sum");

    rng.shuffle(stubs);
    const std::size_t m = stubs.size() / 2;
    std::vector<std::pair<Vertex, Vertex>> pairs(m);
    for (std::size_t i = 0; i < m; ++i)
        pairs[i] = {stubs[2 * i], stubs[2 * i + 1]};
    if (m == 0) return pairs;

    std::unordered_map<std::uint64_t, int> mult;
    for (const auto& [a, b] : pairs)
        if (a != b) ++mult[edge_key(a, b)];

    auto is_bad = [&](std::size_t i) {
        const auto& [a, b] = pairs[i];
        if (a == b) return true;
        const auto k = edge_key(a, b);
        return mult[k] > 1 || forbidden.count(k) > 0;
    };

    std::vector<std::size_t> worklist;
    for (std::size_t i = 0; i < m; ++i)
        if (is_bad(i)) worklist.push_back(i);

    const std::uint64_t max_attempts =
        100ULL * static_cast<std::uint64_t>(stubs.size());
    std::uint64_t attempts = 0;
    while (!worklist.empty()) {
        const std::size_t i = worklist.back();
        if (!is_bad(i)) {  // a sibling swap may have fixed a duplicate
            worklist.pop_back();
            continue;
        }
        if (++attempts > max_attempts)
            throw GraphError("degree-sequence repair failed after " +
                             std::to_string(attempts - 1) + " swap attempts");

        const std::size_t j = rng.below(m);
        if (j == i) continue;
        auto [u, v] = pairs[i];
        auto [x, y] = pairs[j];
        if (rng.below(2)) std::swap(x, y);

        if (u == y || x == v) continue;
        const auto k1 = edge_key(u, y);
        const auto k2 = edge_key(x, v);
        if (k1 == k2 || forbidden.count(k1) || forbidden.count(k2)) continue;

        if (u != v) --mult[edge_key(u, v)];
        if (pairs[j].first != pairs[j].second)
            --mult[edge_key(pairs[j].first, pairs[j].second)];
        if (mult[k1] == 0 && mult[k2] == 0) {
            ++mult[k1];
            ++mult[k2];
            pairs[i] = {u, y};
            pairs[j] = {x, v};
            worklist.push_back(j);  // rechecked (and popped) next round
        } else {
            if (u != v) ++mult[edge_key(u, v)];
            if (pairs[j].first != pairs[j].second)
                ++mult[edge_key(pairs[j].first, pairs[j].second)];
        }
    }
    return pairs;
}

}  // namespace

namespace {

// Havel-Hakimi realization of a degree sequence; empty optional when the
// sequence is not graphical.
std::optional<std::vector<std::pair<int, int>>> havel_hakimi(
    std::vector<int> deg) {
    const int n = static_cast<int>(deg.size());
    std::vector<std::pair<int, int>> edges;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    while (true) {
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return deg[a] > deg[b]; });
        const int v = order[0];
        if (deg[v] == 0) return edges;
        if (deg[v] > n - 1) return std::nullopt;
        const int take = deg[v];
        deg[v] = 0;
        for (int i = 1; i <= take; ++i) {
            const int w = order[i];
            if (deg[w] == 0) return std::nullopt;
            --deg[w];
            edges.emplace_back(v, w);
        }
    }
}

}  // namespace

Graph regularize(const Graph& g, int degree) {
    if (g.observed_max_degree() > degree)
        throw GraphError("regularize: graph max degree exceeds target D");
    const int n0 = g.n();
    std::vector<std::vector<Vertex>> adj(n0);
    for (Vertex v = 0; v < n0; ++v) adj[v] = g.neighbors(v);

    auto deg = [&](Vertex v) { return static_cast<int>(adj[v].size()); };
    auto is_adj = [&](Vertex u, Vertex v) {
        return std::binary_search(adj[u].begin(), adj[u].end(), v);
    };
    auto add_edge = [&](Vertex u, Vertex v) {
        adj[u].insert(std::lower_bound(adj[u].begin(), adj[u].end(), v), v);
        adj[v].insert(std::lower_bound(adj[v].begin(), adj[v].end(), u), u);
    };

    // Phase 1: join non-adjacent deficient pairs, most deficient first.
    while (true) {
        std::vector<Vertex> deficient;
        for (Vertex v = 0; v < n0; ++v)
            if (deg(v) < degree) deficient.push_back(v);
        if (deficient.empty()) break;
        std::stable_sort(deficient.begin(), deficient.end(),
                         [&](Vertex a, Vertex b) { return deg(a) < deg(b); });
        bool added = false;
        for (std::size_t i = 0; i < deficient.size() && !added; ++i)
            for (std::size_t j = i + 1; j < deficient.size() && !added; ++j)
                if (!is_adj(deficient[i], deficient[j])) {
                    add_edge(deficient[i], deficient[j]);
                    added = true;
                }
        if (!added) break;  // deficient set is a clique
    }

    // Phase 2: absorb the leftover deficient clique with a padding set W.
    // W's internal graph comes from Havel-Hakimi on its complement degrees;
    // the smallest feasible |W| <= D+2 is used.
    std::vector<Vertex> clique;
    std::vector<int> need;
    long long s = 0;
    int max_need = 0;
    for (Vertex v = 0; v < n0; ++v)
        if (deg(v) < degree) {
            clique.push_back(v);
            need.push_back(degree - deg(v));
            s += need.back();
            max_need = std::max(max_need, need.back());
        }

    if (s > 0) {
        bool built = false;
        for (int q = std::max(1, max_need); q <= degree + 2 && !built; ++q) {
            // stubs round-robin over W
            std::vector<int> ext(q, 0);
            std::vector<std::pair<Vertex, int>> stubs;  // (original v, w index)
            int t = 0;
            for (std::size_t i = 0; i < clique.size(); ++i)
                for (int r = 0; r < need[i]; ++r, ++t)
                    stubs.emplace_back(clique[i], t % q);
            bool ok = true;
            for (int w = 0; w < q; ++w) {
                // recomputed from round robin
                ext[w] = static_cast<int>(s / q) + (w < s % q ? 1 : 0);
                const int internal = degree - ext[w];
                if (internal < 0 || internal > q - 1) ok = false;
            }
            if (!ok) continue;
            long long internal_sum = static_cast<long long>(q) * degree - s;
            if (internal_sum % 2 != 0) continue;
            std::vector<int> comp(q);
            for (int w = 0; w < q; ++w) comp[w] = (q - 1) - (degree - ext[w]);
            auto comp_edges = havel_hakimi(comp);
            if (!comp_edges) continue;

            const int base = n0;
            for (int w = 0; w < q; ++w) adj.emplace_back();
            for (const auto& [v, w] : stubs) add_edge(v, base + w);
            std::vector<std::vector<char>> non(q, std::vector<char>(q, 0));
            for (const auto& [a, b] : *comp_edges) non[a][b] = non[b][a] = 1;
            for (int a = 0; a < q; ++a)
                for (int b = a + 1; b < q; ++b)
                    if (!non[a][b]) add_edge(base + a, base + b);
            built = true;
        }
        if (!built)
            throw GraphError("regularize could not realize the padding gadget");
    }

    const int n_final = static_cast<int>(adj.size());
    if (n_final > n0 + degree + 2)
        throw GraphError("regularize exceeded the n+D+2 vertex bound");
    for (Vertex v = 0; v < n_final; ++v)
        if (deg(v) != degree)
            throw GraphError("regularize produced a non-regular graph");
    return Graph(n_final, std::move(adj), degree);
}

Graph gen_disjoint_cliques(int m, int degree) {
    if (m < 1 || degree < 1)
        throw GraphError("disjoint cliques require m >= 1 and D >= 1");
    const int k = degree + 1;
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(m) * k * (k - 1) / 2);
    for (int c = 0; c < m; ++c) {
        const int base = c * k;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) edges.emplace_back(base + i, base + j);
    }
    Graph g = build_graph(m * k, edges);
    g.set_max_degree_bound(degree);
    return g;
}

Graph gen_random_regular(int n, int degree, std::uint64_t seed) {
    if (degree >= n) throw GraphError("random regular requires D < n");
    if ((static_cast<long long>(n) * degree) % 2 != 0)
        throw GraphError("parity error: n*D must be even");
    Rng rng(mix64(seed, 0x9267a3f1ULL));
    std::vector<int> deg(n, degree);
    auto pairs = pair_degree_sequence(deg, rng, {});
    Graph g = build_graph(n, pairs);
    g.set_max_degree_bound(degree);
    return g;
}

Graph gen_hybrid(int m, int s, int degree, std::uint64_t seed) {
    if (m < 0 || s < 0 || degree < 1) throw GraphError("bad hybrid parameters");
    if (m == 0) return gen_random_regular(s, degree, seed);
    if (s == 0) return gen_disjoint_cliques(m, degree);
    if (s <= degree) throw GraphError("hybrid requires s == 0 or s > D");
    if ((static_cast<long long>(s) * degree) % 2 != 0)
        throw GraphError("infeasible degree sequence: s*D odd");

    const int k = degree + 1;
    Rng rng(mix64(seed, 0x5bd1e995ULL));
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<Vertex> external;  // cluster vertices owed one outside edge

    for (int c = 0; c < m; ++c) {
        const int base = c * k;
        const int matched = 2 * (k / 2);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                // drop the matching pairs (0,1), (2,3), ... on the even prefix
                if (j == i + 1 && i % 2 == 0 && j < matched) continue;
                edges.emplace_back(base + i, base + j);
            }
        for (int i = 0; i < matched; ++i) external.push_back(base + i);
    }

    const int sparse_base = m * k;
    std::vector<int> absorbed(s, 0);
    for (Vertex w : external) {
        int tries = 0;
        while (true) {
            if (++tries > 1000 * s)
                throw GraphError(
                    "infeasible degree sequence: cannot place external edges");
            int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(s)));
            if (absorbed[u] < degree) {
                ++absorbed[u];
                edges.emplace_back(w, sparse_base + u);
                break;
            }
        }
    }

    // External stub count is even, so s*D even makes the remainder pairable.
    std::vector<int> internal_deg(s);
    for (int u = 0; u < s; ++u) internal_deg[u] = degree - absorbed[u];

    auto sparse_pairs = pair_degree_sequence(internal_deg, rng, {});
    for (const auto& [a, b] : sparse_pairs)
        edges.emplace_back(sparse_base + a, sparse_base + b);

    Graph g = build_graph(m * k + s, edges);
    g.set_max_degree_bound(degree);
    return g;
}

Graph generate(const GeneratorSpec& spec) {
    switch (spec.family) {
        case GraphFamily::DisjointCliques:
            return gen_disjoint_cliques(spec.m, spec.degree);
        case GraphFamily::RandomRegular:
            return gen_random_regular(spec.n, spec.degree, spec.seed);
        case GraphFamily::Hybrid:
            return gen_hybrid(spec.m, spec.n, spec.degree, spec.seed);
        case GraphFamily::ExplicitFile:
            return read_graph_file(spec.path);
    }
    throw GraphError("unknown graph family");
}

}  // namespace palsim
