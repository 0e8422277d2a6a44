#include "palsim/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <unordered_map>

#include "palsim/list_coloring.hpp"
#include "palsim/rng.hpp"

namespace palsim {

namespace {

std::vector<Color> set_intersection(const std::vector<Color>& a,
                                    const std::vector<Color>& b) {
    std::vector<Color> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
}

int intersection_size(const std::vector<Color>& a, const std::vector<Color>& b) {
    std::size_t i = 0, j = 0;
    int count = 0;
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

void assign_xi(const Graph& g, const PaletteSystem& p, TentativeAssignment& ta,
               std::uint64_t seed) {
    const int d = p.degree;
    ta.xi.resize(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        const int dg = color_degree_S(g, p, v, ta.tau[v]);
        const double keep = std::pow(zhat(d), d - dg);
        Rng rng(mix64(seed, 0x00db5a11ULL, static_cast<std::uint64_t>(v)));
        ta.xi[v] = rng.bernoulli(keep) ? 1 : 0;
    }
}

}  // namespace

TentativeAssignment tentative_assign(const Graph& g, const PaletteSystem& p,
                                     std::uint64_t seed) {
    TentativeAssignment ta;
    ta.seed = seed;
    ta.tau.resize(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        Rng rng(mix64(seed, 0x7a0b17ULL, static_cast<std::uint64_t>(v)));
        ta.tau[v] = p.S[v][rng.below(p.S[v].size())];
    }
    assign_xi(g, p, ta, seed);
    return ta;
}

TentativeAssignment two_step_assign(const Graph& g, const PaletteSystem& p,
                                    double delta, std::uint64_t seed) {
    const double raw = 0.1 * delta * std::log(static_cast<double>(g.n()));
    const int ell0 = static_cast<int>(std::floor(raw));
    if (ell0 < 1)
        throw GraphError("two_step_assign: 0.1*delta*log n below 1");
    return two_step_assign_ell0(g, p, ell0, seed);
}

TentativeAssignment two_step_assign_ell0(const Graph& g, const PaletteSystem& p,
                                         int ell0, std::uint64_t seed) {
    if (ell0 < 1) throw GraphError("two_step_assign: ell0 < 1");
    TentativeAssignment ta;
    ta.seed = seed;
    ta.first_lists = sample_lists(p, ell0, mix64(seed, 0x57e91ULL));
    ta.tau.resize(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
        Rng rng(mix64(seed, 0x7a0b17ULL, static_cast<std::uint64_t>(v)));
        const auto& l0 = ta.first_lists->L[v];
        ta.tau[v] = l0[rng.below(l0.size())];
    }
    assign_xi(g, p, ta, seed);
    return ta;
}

RetainedColoring retained_set(const Graph& g, const TentativeAssignment& ta) {
    RetainedColoring rc;
    rc.in_T.assign(g.n(), 0);
    rc.sigma.assign(g.n(), -1);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (!ta.xi[v]) continue;
        bool clash = false;
        for (Vertex w : g.neighbors(v))
            if (ta.tau[w] == ta.tau[v]) {
                clash = true;
                break;
            }
        if (!clash) {
            rc.in_T[v] = 1;
            rc.T.push_back(v);
            rc.sigma[v] = ta.tau[v];
        }
    }
    return rc;
}

std::vector<std::tuple<Vertex, Vertex, Color>> fraternal_pairs(
    const Graph& g, const PaletteSystem& p, Vertex v) {
    std::vector<std::tuple<Vertex, Vertex, Color>> out;
    const auto& nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            const Vertex u = nb[i], w = nb[j];
            if (g.adjacent(u, w)) continue;
            for (Color c : set_intersection(p.S[u], p.S[w]))
                out.emplace_back(u, w, c);
        }
    return out;
}

std::vector<std::pair<Vertex, Color>> alien_pairs(const Graph& g,
                                                  const PaletteSystem& p,
                                                  Vertex v) {
    std::vector<std::pair<Vertex, Color>> out;
    for (Vertex w : g.neighbors(v)) {
        std::vector<Color> diff;
        std::set_difference(p.S[w].begin(), p.S[w].end(), p.S[v].begin(),
                            p.S[v].end(), std::back_inserter(diff));
        for (Color c : diff) out.emplace_back(w, c);
    }
    return out;
}

std::int64_t fraternal_count(const Graph& g, const PaletteSystem& p, Vertex v) {
    std::int64_t total = 0;
    const auto& nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            if (g.adjacent(nb[i], nb[j])) continue;
            total += intersection_size(p.S[nb[i]], p.S[nb[j]]);
        }
    return total;
}

std::int64_t alien_count(const Graph& g, const PaletteSystem& p, Vertex v) {
    std::int64_t total = 0;
    for (Vertex w : g.neighbors(v))
        total += static_cast<std::int64_t>(p.S[w].size()) -
                 intersection_size(p.S[w], p.S[v]);
    return total;
}

SlackBranch sparse_dichotomy(const Graph& g, const PaletteSystem& p, Vertex v,
                             double vartheta) {
    const double d = p.degree;
    const bool frat = fraternal_count(g, p, v) >= vartheta * d * d * d / 2.0;
    const bool alien = alien_count(g, p, v) >= vartheta * d * d / 2.0;
    if (frat && alien) return SlackBranch::Both;
    if (frat) return SlackBranch::Fraternal;
    if (alien) return SlackBranch::Alien;
    return SlackBranch::Neither;
}

std::pair<int, int> realized_events(const Graph& g, const PaletteSystem& p,
                                    const RetainedColoring& rc,
                                    const TentativeAssignment& ta, Vertex v) {
    // group neighbors by tentative color
    std::unordered_map<Color, std::vector<Vertex>> holders;
    for (Vertex w : g.neighbors(v)) holders[ta.tau[w]].push_back(w);

    int fraternal = 0;
    int alien = 0;
    for (const auto& [gamma, xs] : holders) {
        if (xs.size() == 2) {
            const Vertex u = xs[0], w = xs[1];
            if (rc.in_T[u] && rc.in_T[w] && !g.adjacent(u, w)) ++fraternal;
        }
        for (Vertex w : xs)
            if (rc.in_T[w] && !p.in_S(v, gamma)) ++alien;
    }

    // both are certified lower bounds on the slack
    int t_in_n = 0;
    std::vector<Color> used;
    for (Vertex w : g.neighbors(v))
        if (rc.in_T[w]) {
            ++t_in_n;
            if (p.in_S(v, rc.sigma[w])) used.push_back(rc.sigma[w]);
        }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    const int slack = t_in_n - static_cast<int>(used.size());
    if (slack < fraternal || slack < alien)
        throw GraphError("realized event count exceeds the slack it bounds");
    return {fraternal, alien};
}

double expected_fraternal_events(const Graph& g, const PaletteSystem& p,
                                 Vertex v) {
    const int d = p.degree;
    const double zh = zhat(d);
    double total = 0.0;
    const auto& nb = g.neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            const Vertex u = nb[i], w = nb[j];
            if (g.adjacent(u, w)) continue;
            for (Color gamma : set_intersection(p.S[u], p.S[w])) {
                // J^v_{uw,gamma}: gamma-listed neighbors of {v,u,w} minus {u,w}
                std::vector<Vertex> jset;
                for (Vertex z : g.neighbors(v))
                    if (z != u && z != w && p.in_S(z, gamma)) jset.push_back(z);
                for (Vertex z : g.neighbors(u))
                    if (z != u && z != w && p.in_S(z, gamma)) jset.push_back(z);
                for (Vertex z : g.neighbors(w))
                    if (z != u && z != w && p.in_S(z, gamma)) jset.push_back(z);
                std::sort(jset.begin(), jset.end());
                jset.erase(std::unique(jset.begin(), jset.end()), jset.end());
                const int dj = static_cast<int>(jset.size());
                const int du = color_degree_S(g, p, u, gamma);
                const int dw = color_degree_S(g, p, w, gamma);
                total += std::pow(zh, dj + 2 * d - du - dw) /
                         (static_cast<double>(d + 1) * (d + 1));
            }
        }
    return total;
}

SparseDiagnostics sparse_diagnostics(const Graph& g, const PaletteSystem& p,
                                     const Decomposition& dec,
                                     const RetainedColoring& rc,
                                     const TentativeAssignment& ta,
                                     double vartheta) {
    SparseDiagnostics diag;
    for (Vertex v : dec.sparse_part) {
        VertexDiagnostics vd;
        vd.v = v;
        int t_in_n = 0;
        std::vector<Color> used;
        for (Vertex w : g.neighbors(v))
            if (rc.in_T[w]) {
                ++t_in_n;
                if (p.in_S(v, rc.sigma[w])) used.push_back(rc.sigma[w]);
            }
        std::sort(used.begin(), used.end());
        used.erase(std::unique(used.begin(), used.end()), used.end());
        vd.t_in_nbhd = t_in_n;
        vd.slack = t_in_n - static_cast<int>(used.size());
        vd.f_size = fraternal_count(g, p, v);
        vd.a_size = alien_count(g, p, v);
        vd.branch = sparse_dichotomy(g, p, v, vartheta);
        auto [fr, al] = realized_events(g, p, rc, ta, v);
        vd.fraternal_realized = fr;
        vd.alien_realized = al;
        diag.per_vertex.push_back(vd);
    }
    return diag;
}

std::vector<bool> check_targets(const SparseDiagnostics& diag, int degree,
                                double vartheta_prime, double tol) {
    const double target = std::exp(-1.0) * degree;
    std::vector<bool> pass;
    pass.reserve(diag.per_vertex.size());
    for (const auto& vd : diag.per_vertex) {
        const bool size_ok = vd.t_in_nbhd >= (1.0 - tol) * target &&
                             vd.t_in_nbhd <= (1.0 + tol) * target;
        const bool slack_ok = vd.slack > vartheta_prime * degree;
        pass.push_back(size_ok && slack_ok);
    }
    return pass;
}

SparseCompletion complete_sparse(const Graph& g, const PaletteSystem& p,
                                 const Decomposition& dec,
                                 const RetainedColoring& rc,
                                 const ListSample& lists,
                                 const TentativeAssignment& ta,
                                 SparseStrategy strategy, std::uint64_t seed,
                                 std::uint64_t node_budget, int restarts) {
    SparseCompletion out;
    out.colors.assign(g.n(), -1);

    std::vector<Vertex> uncolored;
    for (Vertex v : dec.sparse_part) {
        if (rc.in_T[v])
            out.colors[v] = rc.sigma[v];
        else
            uncolored.push_back(v);
    }

    // residual lists: L_v minus colors retained on neighbors. tau_v stays
    // available: the single-draw model only needs tau_v to be a member of
    // L_v, and with full lists the greedy clique argument needs it back.
    std::vector<std::vector<Color>> residual(uncolored.size());
    for (std::size_t i = 0; i < uncolored.size(); ++i) {
        const Vertex v = uncolored[i];
        std::vector<Color> blocked;
        for (Vertex w : g.neighbors(v))
            if (rc.in_T[w]) blocked.push_back(rc.sigma[w]);
        std::sort(blocked.begin(), blocked.end());
        for (Color c : lists.L[v])
            if (!std::binary_search(blocked.begin(), blocked.end(), c))
                residual[i].push_back(c);
        if (residual[i].empty()) {
            out.failed_vertex = v;
            out.failed_residual_size = 0;
            return out;
        }
    }

    auto attempt = [&](std::uint64_t salt, bool exhaustive,
                       std::uint64_t budget) {
        ListColoringEngine engine(g, uncolored, residual);
        if (salt != 0) engine.shuffle_value_order(mix64(seed, salt));
        ListColoringEngine::Result res =
            exhaustive ? engine.solve(budget) : engine.greedy();
        out.nodes_explored += engine.nodes();
        if (res == ListColoringEngine::Result::Colored) {
            for (std::size_t i = 0; i < uncolored.size(); ++i)
                out.colors[uncolored[i]] = engine.assignment()[i];
            return true;
        }
        if (!exhaustive && engine.failed_vertex() != -1) {
            out.failed_vertex = engine.failed_vertex();
            const int ti = engine.target_index(out.failed_vertex);
            out.failed_residual_size = engine.failed_list_size(ti);
        }
        return false;
    };

    bool ok = false;
    switch (strategy) {
        case SparseStrategy::Greedy:
            ok = attempt(0, false, 0);
            break;
        case SparseStrategy::Backtrack:
            ok = attempt(0, true, node_budget);
            break;
        case SparseStrategy::Restart: {
            const std::uint64_t slice =
                std::max<std::uint64_t>(node_budget / std::max(restarts, 1), 1);
            for (int r = 0; r < restarts && !ok; ++r)
                ok = attempt(0x9e37 + r, true, slice);
            break;
        }
    }
    if (!ok && out.failed_vertex == -1 && !uncolored.empty()) {
        // backtracking exhausted or budget hit; report the tightest vertex
        int best = 0;
        for (std::size_t i = 1; i < uncolored.size(); ++i)
            if (residual[i].size() < residual[best].size())
                best = static_cast<int>(i);
        out.failed_vertex = uncolored[best];
        out.failed_residual_size = static_cast<int>(residual[best].size());
    }
    out.ok = ok;
    return out;
}

}  // namespace palsim
