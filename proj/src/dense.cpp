#include "palsim/dense.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace palsim {

const char* process_action_name(int action) {
    switch (action) {
        case 1: return "I";
        case 2: return "II";
        case 3: return "III";
    }
    return "?";
}

int ClusterBigraph::position_of(Vertex v) const {
    auto it = std::lower_bound(C.begin(), C.end(), v);
    if (it == C.end() || *it != v) return -1;
    return static_cast<int>(it - C.begin());
}

ClusterBigraph cluster_context(const Graph& g, const PaletteSystem& p,
                               const std::vector<Color>& sigma,
                               const std::vector<Vertex>& cluster) {
    ClusterBigraph ctx;
    ctx.C = cluster;
    std::sort(ctx.C.begin(), ctx.C.end());
    ctx.degree = p.degree;
    ctx.gamma_size = p.gamma_size;
    const int k = static_cast<int>(ctx.C.size());
    ctx.x = k - (p.degree + 1);

    std::vector<char> in_c(g.n(), 0);
    for (Vertex v : ctx.C) in_c[v] = 1;

    ctx.allowed.resize(k);
    ctx.nabla.resize(k);
    for (int i = 0; i < k; ++i) {
        const Vertex v = ctx.C[i];
        std::vector<Color> blocked;
        int external = 0;
        for (Vertex w : g.neighbors(v)) {
            if (in_c[w]) continue;
            ++external;
            if (sigma[w] >= 0) blocked.push_back(sigma[w]);
        }
        ctx.nabla[i] = external;
        std::sort(blocked.begin(), blocked.end());
        for (Color c : p.S[v])
            if (!std::binary_search(blocked.begin(), blocked.end(), c))
                ctx.allowed[i].push_back(c);
    }

    ctx.H.resize(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (!g.adjacent(ctx.C[i], ctx.C[j])) {
                ctx.H[i].push_back(j);
                ctx.H[j].push_back(i);
                ++ctx.h_edges;
            }
    ctx.zeta = static_cast<double>(ctx.h_edges) /
               (static_cast<double>(p.degree) * p.degree);
    return ctx;
}

TrimResult trim_lists(const ClusterBigraph& ctx, const ListSample& lists,
                      double delta, int n_global) {
    TrimResult out;
    const int k = static_cast<int>(ctx.C.size());
    out.lists.resize(k);
    out.flagged.assign(k, 0);
    const double flag_threshold =
        0.5 * delta * std::log(static_cast<double>(n_global));
    for (int i = 0; i < k; ++i) {
        const auto& lv = lists.L[ctx.C[i]];
        const auto& tv = ctx.allowed[i];
        std::set_intersection(lv.begin(), lv.end(), tv.begin(), tv.end(),
                              std::back_inserter(out.lists[i]));
        const int lost = static_cast<int>(lv.size() - out.lists[i].size());
        if (lost >= flag_threshold) {
            out.flagged[i] = 1;
            ++out.flagged_count;
        }
    }
    return out;
}

namespace {

int intersection_count(const std::vector<Color>& a, const std::vector<Color>& b) {
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

}  // namespace

RegimeReport classify_regime(const ClusterBigraph& ctx, const Params& params) {
    RegimeReport rep;
    const int d = ctx.degree;
    const int k = static_cast<int>(ctx.C.size());
    rep.popular_threshold = params.popular_threshold(d);
    rep.zeta0 = params.zeta0(d);
    rep.zeta_large = ctx.zeta >= rep.zeta0;

    // color degrees in F (over allowed lists)
    std::vector<int> d_color(ctx.gamma_size, 0);
    for (const auto& tv : ctx.allowed)
        for (Color c : tv) ++d_color[c];
    rep.popular.assign(ctx.gamma_size, 0);
    for (Color c = 0; c < ctx.gamma_size; ++c)
        if (d_color[c] > rep.popular_threshold) {
            rep.popular[c] = 1;
            ++rep.popular_count;
        }
    rep.p_bound_margin = (1.0 + 2.0 * params.rho) * d - rep.popular_count;
    rep.p_bound_ok = rep.p_bound_margin > 0;

    // d_U(v) = |T_v \ P| and the set S
    rep.in_S.assign(k, 0);
    const double s_threshold = params.theta * d / 2.0;
    for (int i = 0; i < k; ++i) {
        int du = 0;
        for (Color c : ctx.allowed[i])
            if (!rep.popular[c]) ++du;
        if (du > s_threshold) {
            rep.in_S[i] = 1;
            ++rep.s;
        }
    }

    // (R1) and the R2 counterpart over the non-edges of H
    for (int i = 0; i < k; ++i)
        for (int j : ctx.H[i]) {
            if (j <= i) continue;
            std::vector<Color> common;
            std::set_intersection(ctx.allowed[i].begin(), ctx.allowed[i].end(),
                                  ctx.allowed[j].begin(), ctx.allowed[j].end(),
                                  std::back_inserter(common));
            for (Color c : common) {
                if (rep.popular[c])
                    rep.r1_lhs += 1.0;
                else
                    rep.r2_lhs += 1.0;
            }
        }
    rep.r1_threshold = params.theta * ctx.zeta * std::pow(d, 3);
    rep.r1 = rep.r1_lhs > rep.r1_threshold;
    rep.r2 = rep.r2_lhs > rep.r1_threshold;
    rep.ssize_threshold = std::sqrt(params.theta * ctx.zeta) * d;
    rep.ssize = rep.s > rep.ssize_threshold;
    rep.r2_implies_ssize_ok = !rep.r2 || rep.ssize;
    return rep;
}

ProcessParams resolve_process_params(const ClusterBigraph& ctx,
                                     const Params& params, int ell,
                                     int n_global) {
    ProcessParams pp;
    const double d = ctx.degree;
    const double zeta = ctx.zeta;
    const double eps = params.eps;
    const double logn = std::log(static_cast<double>(n_global));

    const double eta_lo = std::max(zeta, 1.0 / d);
    const double eta_hi = zeta / eps;
    pp.eta = std::sqrt(eta_lo * eta_hi);
    if (eta_lo > eta_hi) {
        pp.eta = eta_lo;
        pp.eta_clamped = true;
    }

    pp.q = 1.0 - std::exp(-params.theta * zeta * ell /
                          (18.0 * params.b_const * eps));

    const double k_lo = std::max(1.0, (eps / (zeta * d)) * pp.q / pp.eta);
    const double k_hi = pp.q / pp.eta;
    pp.big_k = std::sqrt(std::max(k_lo, 1e-12) * std::max(k_hi, 1e-12));
    if (k_lo > k_hi || pp.big_k < k_lo || pp.big_k > k_hi) {
        pp.big_k = k_lo;
        pp.k_clamped = true;
    }

    pp.raw_m = pp.big_k * pp.eta * d / pp.q;
    if (pp.q <= 0 || pp.raw_m < 1.0) {
        pp.m = 0;  // Process not runnable at this scale
    } else {
        // cap keeps m well below D but never below the S3 pairing target
        const int m_cap =
            std::max(static_cast<int>(std::ceil(pp.eta * d)) + 2,
                     static_cast<int>(std::floor(d / 4.0)));
        pp.m = static_cast<int>(std::llround(pp.raw_m));
        if (pp.m > m_cap) {
            pp.m = m_cap;
            pp.m_clamped = true;
        }
    }
    pp.s1_budget = 0.1 * params.delta * logn;
    pp.s2_bound = 6.0 * zeta * d / params.delta;
    pp.s3_target = pp.eta * d;
    return pp;
}

ProcessState run_process(const ClusterBigraph& ctx, const TrimResult& trimmed,
                         const Params& params, const ProcessParams& pp,
                         std::uint64_t /*seed: choices are deterministic*/) {
    if (ctx.h_edges == 0)
        throw GraphError("run_process: H is empty (regime cannot be R1)");
    if (pp.m < 1)
        throw GraphError("run_process: m < 1 after parameter resolution");

    ProcessState st;
    st.params = pp;
    const int k = static_cast<int>(ctx.C.size());
    const int d = ctx.degree;

    // |H_gamma| per color and the ordering gamma_1, gamma_2, ...
    RegimeReport rep = classify_regime(ctx, params);
    std::vector<std::size_t> h_gamma(ctx.gamma_size, 0);
    for (int i = 0; i < k; ++i)
        for (int j : ctx.H[i]) {
            if (j <= i) continue;
            std::vector<Color> common;
            std::set_intersection(ctx.allowed[i].begin(), ctx.allowed[i].end(),
                                  ctx.allowed[j].begin(), ctx.allowed[j].end(),
                                  std::back_inserter(common));
            for (Color c : common) ++h_gamma[c];
        }
    std::vector<Color> order;
    for (Color c = 0; c < ctx.gamma_size; ++c)
        if (rep.popular[c]) order.push_back(c);
    std::stable_sort(order.begin(), order.end(), [&](Color a, Color b) {
        if (h_gamma[a] != h_gamma[b]) return h_gamma[a] > h_gamma[b];
        return a < b;
    });
    const int m = std::min<int>(pp.m, static_cast<int>(order.size()));

    // original-H degrees, fixed for the (II) choice and the S2 bound
    std::vector<int> dh(k);
    for (int i = 0; i < k; ++i) dh[i] = static_cast<int>(ctx.H[i].size());

    std::vector<char> alive(k, 1);
    const double ordering_floor =
        2.0 * params.theta * ctx.zeta * static_cast<double>(d) * d / 3.0;

    bool s2_ok = true;
    int removed_by_ii = 0;
    bool failed_step = false;
    for (int step = 1; step <= m && !failed_step; ++step) {
        const Color gamma = order[step - 1];
        st.used_colors.push_back(gamma);
        if (static_cast<double>(h_gamma[gamma]) < ordering_floor)
            st.ordering_audit_ok = false;

        std::vector<int> ji;  // alive positions holding gamma
        for (int i = 0; i < k; ++i)
            if (alive[i] &&
                std::binary_search(trimmed.lists[i].begin(),
                                   trimmed.lists[i].end(), gamma))
                ji.push_back(i);

        ProcessStep rec;
        rec.i = step;
        rec.gamma = gamma;
        rec.j_size = static_cast<int>(ji.size());
        rec.h_gamma_size = h_gamma[gamma];

        // smallest non-edge pair of H[J_i] in lexicographic (C-order)
        int xi = -1, yi = -1;
        for (std::size_t a = 0; a < ji.size() && xi < 0; ++a)
            for (int j : ctx.H[ji[a]]) {
                if (j <= ji[a] || !alive[j]) continue;
                if (std::binary_search(ji.begin(), ji.end(), j)) {
                    xi = ji[a];
                    yi = j;
                    break;
                }
            }

        if (xi >= 0) {
            rec.action = 1;
            rec.x = ctx.C[xi];
            rec.y = ctx.C[yi];
            alive[xi] = alive[yi] = 0;
            st.pairs.emplace_back(ctx.C[xi], ctx.C[yi]);
            st.assignments.emplace_back(ctx.C[xi], gamma);
            st.assignments.emplace_back(ctx.C[yi], gamma);
        } else if (!ji.empty()) {
            rec.action = 2;
            int best = ji[0];
            for (int i : ji)
                if (dh[i] < dh[best]) best = i;
            rec.z = ctx.C[best];
            alive[best] = 0;
            ++removed_by_ii;
            st.assignments.emplace_back(ctx.C[best], gamma);
            if (!(dh[best] < pp.s2_bound)) s2_ok = false;
        } else {
            rec.action = 3;
            failed_step = true;  // (S2) is unreachable once J_i is empty
            s2_ok = false;
        }
        st.steps.push_back(rec);

        int alive_count = 0;
        for (int i = 0; i < k; ++i) alive_count += alive[i];
        if (alive_count + 2 * static_cast<int>(st.pairs.size()) +
                removed_by_ii != k)
            st.bookkeeping_ok = false;
    }

    // S1 over the original cluster
    st.s1 = true;
    for (int i = 0; i < k && st.s1; ++i) {
        int hits = 0;
        for (Color c : st.used_colors)
            if (std::binary_search(trimmed.lists[i].begin(),
                                   trimmed.lists[i].end(), c))
                ++hits;
        if (hits > pp.s1_budget) st.s1 = false;
    }
    st.s2 = s2_ok && !failed_step;
    st.s3 = static_cast<double>(st.pairs.size()) >= pp.s3_target;
    st.succeeded = st.s1 && st.s2 && st.s3;
    for (int i = 0; i < k; ++i)
        if (alive[i]) st.survivors.push_back(ctx.C[i]);
    if (!st.succeeded) st.assignments.clear();
    return st;
}

namespace {

// Bigraph over given cluster positions and a color subset; z-ids compact.
struct MatchingSpace {
    Bigraph b;
    std::vector<Color> z_to_color;
    std::vector<int> positions;  // cluster positions on the U side
};

MatchingSpace build_matching_space(const ClusterBigraph& ctx,
                                   const TrimResult& trimmed,
                                   const std::vector<int>& positions,
                                   const std::vector<char>* color_ok) {
    MatchingSpace ms;
    ms.positions = positions;
    std::vector<int> color_id(ctx.gamma_size, -1);
    for (int pos : positions)
        for (Color c : trimmed.lists[pos]) {
            if (color_ok && !(*color_ok)[c]) continue;
            if (color_id[c] == -1) {
                color_id[c] = static_cast<int>(ms.z_to_color.size());
                ms.z_to_color.push_back(c);
            }
        }
    ms.b = Bigraph::empty(static_cast<int>(positions.size()),
                          static_cast<int>(ms.z_to_color.size()));
    for (std::size_t i = 0; i < positions.size(); ++i) {
        for (Color c : trimmed.lists[positions[i]]) {
            if (color_ok && !(*color_ok)[c]) continue;
            ms.b.adj[i].push_back(color_id[c]);
        }
        std::sort(ms.b.adj[i].begin(), ms.b.adj[i].end());
    }
    return ms;
}

bool try_perfect_matching(const ClusterBigraph& ctx, const TrimResult& trimmed,
                          const std::vector<int>& positions,
                          const std::vector<char>* color_ok,
                          std::vector<std::pair<Vertex, Color>>* out,
                          int* deficiency) {
    MatchingSpace ms = build_matching_space(ctx, trimmed, positions, color_ok);
    auto [size, match_u] = max_matching(ms.b);
    if (size < static_cast<int>(positions.size())) {
        if (deficiency) *deficiency = size - static_cast<int>(positions.size());
        return false;
    }
    for (std::size_t i = 0; i < positions.size(); ++i)
        out->emplace_back(ctx.C[positions[i]], ms.z_to_color[match_u[i]]);
    return true;
}

}  // namespace

ClusterColoring color_cluster(const Graph& g, const PaletteSystem& p,
                              const std::vector<Color>& sigma,
                              const std::vector<Vertex>& cluster,
                              const ListSample& lists, const Params& params,
                              int ell, std::uint64_t seed) {
    ClusterColoring result;
    ClusterBigraph ctx = cluster_context(g, p, sigma, cluster);
    TrimResult trimmed = trim_lists(ctx, lists, params.delta, g.n());
    result.trim_flagged = trimmed.flagged_count;
    result.regime = classify_regime(ctx, params);
    const int k = static_cast<int>(ctx.C.size());

    std::vector<int> all_positions(k);
    std::iota(all_positions.begin(), all_positions.end(), 0);

    auto direct_attempt = [&](const char* route, bool is_fallback) {
        std::vector<std::pair<Vertex, Color>> colors;
        int deficiency = 0;
        if (try_perfect_matching(ctx, trimmed, all_positions, nullptr, &colors,
                                 &deficiency)) {
            result.ok = true;
            result.colors = std::move(colors);
            result.route = route;
            result.used_fallback = is_fallback;
            return true;
        }
        result.hall_deficiency = deficiency;
        return false;
    };

    if (!result.regime.zeta_large) {
        if (direct_attempt("direct-small", false)) return result;
        result.failure = "no C-perfect matching in trimmed K (small zeta)";
        return result;
    }

    if (result.regime.r1) {
        ProcessParams pp = resolve_process_params(ctx, params, ell, g.n());
        if (pp.m >= 1 && ctx.h_edges > 0) {
            result.process = run_process(ctx, trimmed, params, pp, seed);
            result.process_ran = true;
            if (result.process.succeeded) {
                // match survivors to colors outside {gamma_1..gamma_m}
                std::vector<char> color_ok(ctx.gamma_size, 1);
                for (Color c : result.process.used_colors) color_ok[c] = 0;
                std::vector<int> survivors;
                for (Vertex v : result.process.survivors)
                    survivors.push_back(ctx.position_of(v));
                std::vector<std::pair<Vertex, Color>> colors =
                    result.process.assignments;
                if (try_perfect_matching(ctx, trimmed, survivors, &color_ok,
                                         &colors, &result.hall_deficiency)) {
                    result.ok = true;
                    result.colors = std::move(colors);
                    result.route = "process";
                    return result;
                }
                result.failure = "post-process remainder matching failed";
            } else {
                result.failure = "process failed S-conditions";
            }
        } else {
            result.failure = "process parameters resolved m < 1";
        }
        if (direct_attempt("process", true)) return result;
        if (result.failure.empty())
            result.failure = "fallback matching failed after process route";
        return result;
    }

    if (result.regime.ssize) {
        if (direct_attempt("hall", false)) return result;
        result.failure = "Hall route: no C-perfect matching in trimmed K";
        return result;
    }

    // staged route: I0 into P, A-matching avoiding the unpopular colors,
    // then I1 into what is left of them.
    const double theta_d = params.theta * ctx.degree;
    std::vector<int> set_i, set_not_i, set_not_s;
    for (int i = 0; i < k; ++i) {
        int du = 0;
        for (Color c : ctx.allowed[i])
            if (!result.regime.popular[c]) ++du;
        if (du > ctx.degree / 3.0)
            set_i.push_back(i);
        else
            set_not_i.push_back(i);
        if (!result.regime.in_S[i]) set_not_s.push_back(i);
    }
    std::vector<int> i0, i1;
    for (int pos : set_i) {
        int hits = 0;
        for (Color c : trimmed.lists[pos])
            if (!result.regime.popular[c]) ++hits;
        if (hits < ell / 4.0)
            i0.push_back(pos);
        else
            i1.push_back(pos);
    }

    bool staged_ok = true;
    std::vector<std::pair<Vertex, Color>> staged_colors;
    std::vector<char> used_color(ctx.gamma_size, 0);

    // (II) I0 -> popular colors
    if (staged_ok && !i0.empty()) {
        std::vector<char> pop_ok = result.regime.popular;
        std::vector<std::pair<Vertex, Color>> m_i0;
        if (try_perfect_matching(ctx, trimmed, i0, &pop_ok, &m_i0,
                                 &result.hall_deficiency)) {
            for (auto& [v, c] : m_i0) {
                used_color[c] = 1;
                staged_colors.emplace_back(v, c);
            }
        } else {
            staged_ok = false;
            result.failure = "staged route: I0 matching into P failed";
        }
    }

    // (III) (C \ I) -> remaining colors, steering clear of unpopular ones
    if (staged_ok) {
        std::vector<char> avoid_p0(ctx.gamma_size, 1);
        for (Color c = 0; c < ctx.gamma_size; ++c)
            if (used_color[c]) avoid_p0[c] = 0;

        // M0: A-matching into P1 = P minus used colors
        std::vector<char> p1_ok(ctx.gamma_size, 0);
        for (Color c = 0; c < ctx.gamma_size; ++c)
            if (result.regime.popular[c] && !used_color[c]) p1_ok[c] = 1;
        const int a_size = std::min<int>(
            static_cast<int>(set_not_s.size()),
            std::max(0, k - static_cast<int>(std::ceil(theta_d))));
        std::vector<int> set_a(set_not_s.begin(), set_not_s.begin() + a_size);

        MatchingSpace whole =
            build_matching_space(ctx, trimmed, set_not_i, &avoid_p0);
        auto [m1_size, m1] = max_matching(whole.b);
        if (m1_size < static_cast<int>(set_not_i.size())) {
            staged_ok = false;
            result.hall_deficiency =
                m1_size - static_cast<int>(set_not_i.size());
            result.failure = "staged route: (C \\ I) matching failed";
        } else {
            // A-matching inside the same space, restricted to P1 columns
            std::vector<int> m0(whole.b.nu, -1);
            {
                Bigraph restricted = whole.b;
                std::vector<char> a_mask(k, 0);
                for (int pos : set_a) a_mask[pos] = 1;
                for (std::size_t i = 0; i < whole.positions.size(); ++i) {
                    std::vector<int> keep;
                    if (a_mask[whole.positions[i]]) {
                        for (int z : restricted.adj[i])
                            if (p1_ok[whole.z_to_color[z]]) keep.push_back(z);
                    }
                    restricted.adj[i] = std::move(keep);
                }
                auto [m0_size, m0_match] = max_matching(restricted);
                if (m0_size == static_cast<int>(set_a.size())) {
                    m0 = m0_match;
                    m1 = combine_matchings(whole.b, m0, m1);
                }
                // if M0 does not exist the plain M1 is kept; the U-avoidance
                // guarantee is then only best-effort (recorded via failure="")
            }
            for (std::size_t i = 0; i < whole.positions.size(); ++i) {
                const Color c = whole.z_to_color[m1[i]];
                used_color[c] = 1;
                staged_colors.emplace_back(ctx.C[whole.positions[i]], c);
            }
        }
    }

    // (IV) I1 -> unpopular colors not used above
    if (staged_ok && !i1.empty()) {
        std::vector<char> u_left(ctx.gamma_size, 0);
        for (Color c = 0; c < ctx.gamma_size; ++c)
            if (!result.regime.popular[c] && !used_color[c]) u_left[c] = 1;
        std::vector<std::pair<Vertex, Color>> m_i1;
        if (try_perfect_matching(ctx, trimmed, i1, &u_left, &m_i1,
                                 &result.hall_deficiency)) {
            for (auto& [v, c] : m_i1) {
                used_color[c] = 1;
                staged_colors.emplace_back(v, c);
            }
        } else {
            staged_ok = false;
            result.failure = "staged route: I1 matching into U failed";
        }
    }

    if (staged_ok) {
        result.ok = true;
        result.colors = std::move(staged_colors);
        result.route = "staged";
        return result;
    }
    if (direct_attempt("staged", true)) return result;
    return result;
}

}  // namespace palsim
