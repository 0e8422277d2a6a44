#include "palsim/decomposition.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace palsim {

namespace {

int codegree(const Graph& g, Vertex u, Vertex v) {
    const auto& a = g.neighbors(u);
    const auto& b = g.neighbors(v);
    int count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

}  // namespace

Decomposition decompose(const Graph& g, double eps) {
    const int d = g.max_degree_bound();
    if (!g.is_regular(d))
        throw GraphError("decompose requires a D-regular graph; regularize first");
    const int n = g.n();
    const double friend_threshold = (1.0 - eps) * d;

    // friendship graph: u ~ v iff adjacent with codegree >= (1-eps)D
    std::vector<std::vector<Vertex>> friends(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v : g.neighbors(u))
            if (u < v && codegree(g, u, v) >= friend_threshold) {
                friends[u].push_back(v);
                friends[v].push_back(u);
            }

    std::vector<char> eligible(n, 0);
    for (Vertex v = 0; v < n; ++v)
        eligible[v] = static_cast<int>(friends[v].size()) >= friend_threshold;

    // components of the friendship graph over eligible vertices
    Decomposition dec;
    dec.eps = eps;
    dec.degree = d;
    dec.cluster_of.assign(n, -1);
    std::vector<int> comp(n, -1);
    std::vector<std::vector<Vertex>> candidates;
    for (Vertex start = 0; start < n; ++start) {
        if (!eligible[start] || comp[start] != -1) continue;
        std::vector<Vertex> stack{start};
        std::vector<Vertex> members;
        comp[start] = static_cast<int>(candidates.size());
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (Vertex w : friends[v])
                if (eligible[w] && comp[w] == -1) {
                    comp[w] = comp[start];
                    stack.push_back(w);
                }
        }
        std::sort(members.begin(), members.end());
        candidates.push_back(std::move(members));
    }

    auto size_ok = [&](const std::vector<Vertex>& c) {
        const double sz = static_cast<double>(c.size());
        return sz >= (1.0 - eps) * d && sz <= (1.0 + 6.0 * eps) * d;
    };
    auto bii_ok = [&](const std::vector<Vertex>& c) {
        std::vector<char> in(n, 0);
        for (Vertex v : c) in[v] = 1;
        for (Vertex v : c) {
            int external = 0;
            for (Vertex w : g.neighbors(v))
                if (!in[w]) ++external;
            int internal_non = static_cast<int>(c.size()) -
                               (g.degree(v) - external);  // counts v itself
            if (external >= 7.0 * eps * d) return false;
            if (internal_non >= 6.0 * eps * d) return false;
        }
        return true;
    };

    for (auto& c : candidates) {
        if (size_ok(c) && bii_ok(c))
            dec.clusters.push_back(std::move(c));
        // otherwise dissolved into V*
    }
    std::sort(dec.clusters.begin(), dec.clusters.end());
    for (std::size_t i = 0; i < dec.clusters.size(); ++i)
        for (Vertex v : dec.clusters[i]) dec.cluster_of[v] = static_cast<int>(i);
    for (Vertex v = 0; v < n; ++v)
        if (dec.cluster_of[v] == -1) dec.sparse_part.push_back(v);
    return dec;
}

DecompositionAudit verify_decomposition(const Graph& g, const Decomposition& dec,
                                        double eps) {
    const int n = g.n();
    const int d = dec.degree > 0 ? dec.degree : g.max_degree_bound();

    std::vector<int> seen(n, 0);
    for (Vertex v : dec.sparse_part) ++seen[v];
    for (const auto& c : dec.clusters)
        for (Vertex v : c) ++seen[v];
    std::string dups, missing;
    for (Vertex v = 0; v < n; ++v) {
        if (seen[v] > 1) dups += " " + std::to_string(v);
        if (seen[v] == 0) missing += " " + std::to_string(v);
    }
    if (!dups.empty() || !missing.empty())
        throw GraphError("not a partition; duplicated:[" + dups + " ] missing:[" +
                         missing + " ]");

    DecompositionAudit audit;
    const double friend_threshold = (1.0 - eps) * d;

    for (Vertex v : dec.sparse_part) {
        int bad = 0;  // neighbors with small codegree
        for (Vertex w : g.neighbors(v))
            if (codegree(g, v, w) < friend_threshold) ++bad;
        audit.sparse_vertices.push_back(v);
        audit.sparse_condition_margin.push_back(bad - eps * d);
        if (!(bad > eps * d)) audit.condition_a_pass = false;

        const double witness =
            static_cast<double>(sparsity_witness(g, v)) - 0.5 * eps * eps * d * d;
        audit.sparse_witness_margin.push_back(witness);
        if (!(witness > 0)) audit.witness_pass = false;
    }

    std::vector<char> in(n, 0);
    for (const auto& c : dec.clusters) {
        for (Vertex v : c) in[v] = 1;
        int worst_ext = 0, worst_non = 0;
        for (Vertex v : c) {
            int external = 0;
            for (Vertex w : g.neighbors(v))
                if (!in[w]) ++external;
            int internal_non =
                static_cast<int>(c.size()) - (g.degree(v) - external);
            worst_ext = std::max(worst_ext, external);
            worst_non = std::max(worst_non, internal_non);
        }
        for (Vertex v : c) in[v] = 0;
        audit.cluster_worst_external.push_back(worst_ext);
        audit.cluster_worst_internal_non.push_back(worst_non);
        audit.cluster_size_lo_margin.push_back(static_cast<double>(c.size()) -
                                               (1.0 - eps) * d);
        audit.cluster_size_hi_margin.push_back((1.0 + 6.0 * eps) * d -
                                               static_cast<double>(c.size()));
        if (audit.cluster_size_lo_margin.back() < 0 ||
            audit.cluster_size_hi_margin.back() < 0)
            audit.size_pass = false;
        if (!(worst_ext < 7.0 * eps * d) || !(worst_non < 6.0 * eps * d))
            audit.bii_pass = false;
    }
    return audit;
}

std::int64_t sparsity_witness(const Graph& g, Vertex v) {
    return nonedge_count(g, g.neighbors(v));
}

void write_decomposition(std::ostream& os, const Decomposition& dec) {
    os << dec.sparse_part.size() << ' ' << dec.clusters.size() << '\n';
    for (std::size_t i = 0; i < dec.sparse_part.size(); ++i)
        os << dec.sparse_part[i] << " \n"[i + 1 == dec.sparse_part.size()];
    if (dec.sparse_part.empty()) os << '\n';
    for (const auto& c : dec.clusters) {
        for (std::size_t i = 0; i < c.size(); ++i)
            os << c[i] << " \n"[i + 1 == c.size()];
    }
}

}  // namespace palsim
