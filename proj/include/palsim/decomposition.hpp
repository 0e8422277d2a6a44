#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "palsim/graph.hpp"

namespace palsim {

// Partition V = V* u C_1 u ... u C_m into a sparse part and dense clusters.
struct Decomposition {
    std::vector<Vertex> sparse_part;             // V*, sorted
    std::vector<std::vector<Vertex>> clusters;   // disjoint, each sorted
    double eps = 0.0;
    int degree = 0;

    // cluster index per vertex, -1 for V*
    std::vector<int> cluster_of;
};

// Exact margins for the partition conditions. A margin > 0 means the
// strict inequality holds with that much room.
struct DecompositionAudit {
    // condition (a), per V*-vertex: #{w ~ v : codeg(v,w) < (1-eps)D} - eps*D
    std::vector<double> sparse_condition_margin;
    std::vector<Vertex> sparse_vertices;  // aligned with the margins

    // per-cluster worst cases for condition (b)(ii)
    std::vector<int> cluster_worst_external;      // max_v |N_v \ C_i|
    std::vector<int> cluster_worst_internal_non;  // max_v |C_i \ N_v|
    std::vector<double> cluster_size_lo_margin;   // |C_i| - (1-eps)D
    std::vector<double> cluster_size_hi_margin;   // (1+6eps)D - |C_i|

    // nonedge witness per V*-vertex: |comp(G)[N_v]| - (eps^2/2) D^2
    std::vector<double> sparse_witness_margin;

    bool condition_a_pass = true;   // margin > 0 for all of V*
    bool size_pass = true;          // (b)(i) for all clusters
    bool bii_pass = true;           // (b)(ii) strict for all clusters
    bool witness_pass = true;       // (eps^2/2) D^2 witness for all of V*

    bool all_pass() const {
        return condition_a_pass && size_pass && bii_pass && witness_pass;
    }
};

// Friendship-component decomposition. G must be D-regular. Candidate
// clusters are connected components of {uv in E : codeg(u,v) >= (1-eps)D}
// restricted to vertices with at least (1-eps)D such friends; components
// violating the size or (b)(ii) bounds are dissolved into V*.
Decomposition decompose(const Graph& g, double eps);

// Recomputes every margin from scratch; never mutates dec. Throws
// GraphError (listing duplicated/missing vertices) if dec is not a
// partition of V(G).
DecompositionAudit verify_decomposition(const Graph& g, const Decomposition& dec,
                                        double eps);

// |comp(G)[N_v]|, the nonedge count inside v's neighborhood.
std::int64_t sparsity_witness(const Graph& g, Vertex v);

// Text format: line "V* k", V* indices, then one line per cluster.
void write_decomposition(std::ostream& os, const Decomposition& dec);

}  // namespace palsim
