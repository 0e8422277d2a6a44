#pragma once

#include <cstdint>
#include <string>

#include "palsim/graph.hpp"

namespace palsim {

enum class GraphFamily { DisjointCliques, RandomRegular, Hybrid, ExplicitFile };

struct GeneratorSpec {
    GraphFamily family = GraphFamily::RandomRegular;
    int m = 0;       // clique count (disjoint-cliques, hybrid)
    int n = 0;       // vertex count (random-regular); sparse count for hybrid
    int degree = 0;  // D
    std::uint64_t seed = 0;
    std::string path;  // explicit-file
};

// Embeds G in a D-regular simple graph on at most n + D + 2 vertices,
// original vertex indices preserved. Greedy: joins non-adjacent deficient
// pairs; once the deficient set is a clique, adds one vertex tied to the
// min(D, #deficient) most-deficient vertices. The vertex bound is enforced
// by a runtime check, not by proof.
Graph regularize(const Graph& g, int degree);

// m disjoint copies of K_{D+1}.
Graph gen_disjoint_cliques(int m, int degree);

// Simple D-regular graph on n vertices via configuration-model pairing
// with bounded edge-swap repair of loops and multi-edges.
Graph gen_random_regular(int n, int degree, std::uint64_t seed);

// m planted near-cliques (K_{D+1} minus a matching on an even prefix,
// padded to degree D with edges into the sparse part) plus a quasi-random
// D-regular sparse part on s vertices. s == 0 plants pure cliques.
Graph gen_hybrid(int m, int s, int degree, std::uint64_t seed);

Graph generate(const GeneratorSpec& spec);

}  // namespace palsim
