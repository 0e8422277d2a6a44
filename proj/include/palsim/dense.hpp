#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "palsim/bigraph.hpp"
#include "palsim/graph.hpp"
#include "palsim/palette.hpp"

namespace palsim {

// Per-cluster context: still-allowed colors, the non-edge graph H on C,
// and the shape statistics (zeta, x, nabla).
struct ClusterBigraph {
    std::vector<Vertex> C;                      // sorted cluster vertices
    std::vector<std::vector<Color>> allowed;    // T_v per cluster position
    std::vector<std::vector<int>> H;            // complement adjacency (positions)
    std::size_t h_edges = 0;                    // |H|
    double zeta = 0.0;                          // |H| = zeta D^2
    int x = 0;                                  // |C| - (D+1)
    std::vector<int> nabla;                     // external degree per position
    int degree = 0;
    int gamma_size = 0;

    int position_of(Vertex v) const;            // index into C, -1 if absent
};

// T_v = S_v minus colors sigma-assigned to neighbors outside C. sigma[v]
// is -1 for uncolored vertices; colored vertices must lie outside C.
ClusterBigraph cluster_context(const Graph& g, const PaletteSystem& p,
                               const std::vector<Color>& sigma,
                               const std::vector<Vertex>& cluster);

struct TrimResult {
    std::vector<std::vector<Color>> lists;  // L_v n T_v per cluster position
    std::vector<char> flagged;              // |L_v \ T_v| >= 0.5 delta log n
    int flagged_count = 0;
};

TrimResult trim_lists(const ClusterBigraph& ctx, const ListSample& lists,
                      double delta, int n_global);

struct RegimeReport {
    double popular_threshold = 0.0;      // b = D/(1+rho)
    std::vector<char> popular;           // indicator per color id
    int popular_count = 0;
    double p_bound_margin = 0.0;         // (1+2rho)D - |P|
    bool p_bound_ok = true;

    std::vector<char> in_S;              // per cluster position: d_U(v) > theta D/2
    int s = 0;
    double r1_lhs = 0.0, r1_threshold = 0.0;
    bool r1 = false;
    double ssize_threshold = 0.0;
    bool ssize = false;
    double r2_lhs = 0.0;
    bool r2 = false;
    bool r2_implies_ssize_ok = true;     // audit of the regime claim
    double zeta0 = 0.0;
    bool zeta_large = false;
};

struct Params;  // palette.hpp
RegimeReport classify_regime(const ClusterBigraph& ctx, const Params& params);

// Resolved Process parameters; desk-scale brackets are clamped and flagged.
struct ProcessParams {
    double eta = 0.0;
    double q = 0.0;
    double big_k = 0.0;
    double raw_m = 0.0;
    int m = 0;  // 0 means the Process is not runnable (fall back)
    double s1_budget = 0.0;   // 0.1 delta log n
    double s2_bound = 0.0;    // 6 zeta D / delta
    double s3_target = 0.0;   // eta D
    bool eta_clamped = false, k_clamped = false, m_clamped = false;
};

ProcessParams resolve_process_params(const ClusterBigraph& ctx,
                                     const Params& params, int ell,
                                     int n_global);

struct ProcessStep {
    int i = 0;
    Color gamma = -1;
    int j_size = 0;
    int action = 0;  // 1 = pair (I), 2 = single (II), 3 = empty J_i (III)
    Vertex x = -1, y = -1, z = -1;  // graph vertex ids
    std::size_t h_gamma_size = 0;
};

const char* process_action_name(int action);  // "I", "II", "III"

struct ProcessState {
    std::vector<ProcessStep> steps;
    std::vector<std::pair<Vertex, Vertex>> pairs;  // N_m as vertex pairs
    std::vector<std::pair<Vertex, Color>> assignments;  // committed on success
    std::vector<Color> used_colors;                // gamma_1..gamma_m
    std::vector<Vertex> survivors;                 // C_m
    bool s1 = false, s2 = false, s3 = false;
    bool succeeded = false;
    bool ordering_audit_ok = true;  // |H_{gamma_i}| >= 2 theta zeta D^2/3
    bool bookkeeping_ok = true;     // |C_i| + 2|N_i| + #II = |C|
    ProcessParams params;
};

// The pairing Process over the m most popular colors by |H_gamma|
// (descending, ties by color id). Deterministic: step (I) takes the
// lexicographically smallest non-edge, step (II) the smallest-id vertex of
// minimum d_H (degrees in the original H). Colors are committed into
// `assignments` only when S1-S3 all hold.
ProcessState run_process(const ClusterBigraph& ctx, const TrimResult& trimmed,
                         const Params& params, const ProcessParams& pp,
                         std::uint64_t seed);

struct ClusterColoring {
    bool ok = false;
    std::vector<std::pair<Vertex, Color>> colors;
    std::string route;          // "direct-small", "process", "hall", "staged"
    bool used_fallback = false;
    bool process_ran = false;
    ProcessState process;
    RegimeReport regime;
    int trim_flagged = 0;
    std::string failure;        // human-readable diagnostic
    int hall_deficiency = 0;
};

// Extends sigma to the cluster using the trimmed lists: route per regime
// (small zeta -> direct matching; R1 -> Process + remainder matching;
// Ssize -> Hall route; otherwise staged matchings), with one direct
// full-matching fallback attempt before declaring stage failure.
ClusterColoring color_cluster(const Graph& g, const PaletteSystem& p,
                              const std::vector<Color>& sigma,
                              const std::vector<Vertex>& cluster,
                              const ListSample& lists, const Params& params,
                              int ell, std::uint64_t seed);

}  // namespace palsim
