#include <doctest.h>

#include <sstream>

#include "palsim/decomposition.hpp"
#include "palsim/generators.hpp"

using namespace palsim;

TEST_SUITE_BEGIN("decomposition");

TEST_CASE("disjoint cliques decompose into themselves") {
    // friendship needs codegree D-1 >= (1-eps)D, so D >= 1/eps
    Graph g = gen_disjoint_cliques(4, 10);
    Decomposition dec = decompose(g, 0.1);
    CHECK(dec.sparse_part.empty());
    REQUIRE(dec.clusters.size() == 4);
    for (const auto& c : dec.clusters) CHECK(c.size() == 11);
    auto audit = verify_decomposition(g, dec, 0.1);
    CHECK(audit.all_pass());
    CHECK(audit.cluster_worst_external[0] == 0);
    CHECK(audit.cluster_worst_internal_non[0] == 1);  // counts v itself
}

TEST_CASE("random regular graph is all sparse") {
    Graph g = gen_random_regular(600, 20, 3);
    Decomposition dec = decompose(g, 0.1);
    CHECK(dec.clusters.empty());
    CHECK(dec.sparse_part.size() == 600);
    auto audit = verify_decomposition(g, dec, 0.1);
    CHECK(audit.condition_a_pass);
    CHECK(audit.witness_pass);
}

TEST_CASE("planted recovery on hybrid instances") {
    // At D=30, eps=0.1 the near-clique codegrees D-3 clear (1-eps)D.
    Graph g = gen_hybrid(2, 120, 30, 17);
    Decomposition dec = decompose(g, 0.1);
    REQUIRE(dec.clusters.size() == 2);
    for (const auto& c : dec.clusters) CHECK(c.size() == 31);
    CHECK(dec.sparse_part.size() == 120);
    auto audit = verify_decomposition(g, dec, 0.1);
    CHECK(audit.all_pass());

    // The spec pairs this example with D=6, where (1-eps)D = 5.4 exceeds
    // every near-clique codegree (3), so recovery demands eps >= 0.5.
    Graph g6 = gen_hybrid(2, 50, 6, 5);
    Decomposition dec6 = decompose(g6, 0.5);
    CHECK(dec6.clusters.size() == 2);
    Decomposition dec6tight = decompose(g6, 0.1);
    CHECK(dec6tight.clusters.empty());  // everything dissolves into V*
}

TEST_CASE("triangle as V* fails condition (a)") {
    Graph tri = gen_disjoint_cliques(1, 2);
    Decomposition dec;
    dec.sparse_part = {0, 1, 2};
    dec.eps = 0.5;
    dec.degree = 2;
    dec.cluster_of.assign(3, -1);
    auto audit = verify_decomposition(tri, dec, 0.5);
    CHECK(!audit.condition_a_pass);
    for (double m : audit.sparse_condition_margin) CHECK(m <= 0);
}

TEST_CASE("verify rejects non-partitions") {
    Graph g = gen_disjoint_cliques(1, 2);
    Decomposition dec;
    dec.sparse_part = {0, 1};  // vertex 2 missing
    dec.degree = 2;
    CHECK_THROWS_WITH_AS(verify_decomposition(g, dec, 0.1),
                         doctest::Contains("missing"), GraphError);
    dec.sparse_part = {0, 1, 2, 2};
    CHECK_THROWS_WITH_AS(verify_decomposition(g, dec, 0.1),
                         doctest::Contains("duplicated"), GraphError);
}

TEST_CASE("decompose requires regular input") {
    Graph path = build_graph(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(decompose(path, 0.1), GraphError);
}

TEST_CASE("sparsity witness") {
    Graph k4 = gen_disjoint_cliques(1, 3);
    CHECK(sparsity_witness(k4, 0) == 0);

    Graph c5 = build_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
    CHECK(sparsity_witness(c5, 0) == 1);

    Graph rr = gen_random_regular(800, 20, 9);
    // neighborhoods are near-independent sets: close to C(20,2)
    CHECK(sparsity_witness(rr, 0) > 150);
    CHECK(sparsity_witness(rr, 0) <= 190);
}

TEST_CASE("decomposition text emission") {
    Graph g = gen_disjoint_cliques(2, 10);
    Decomposition dec = decompose(g, 0.1);
    std::ostringstream os;
    write_decomposition(os, dec);
    const std::string out = os.str();
    CHECK(out.substr(0, 4) == "0 2\n");  // |V*| = 0, two clusters
    CHECK(out.find("11 12 13") != std::string::npos);
}

TEST_CASE("decompose deterministic and V* witness holds") {
    Graph g = gen_hybrid(3, 200, 20, 11);
    Decomposition a = decompose(g, 0.1);
    Decomposition b = decompose(g, 0.1);
    CHECK(a.sparse_part == b.sparse_part);
    CHECK(a.clusters == b.clusters);
    const double floor = 0.5 * 0.1 * 0.1 * 20 * 20;
    for (Vertex v : a.sparse_part) CHECK(sparsity_witness(g, v) > floor);
}

TEST_SUITE_END();
