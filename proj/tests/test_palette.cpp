#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "palsim/generators.hpp"
#include "palsim/palette.hpp"
#include "palsim/rng.hpp"
#include "palsim/sparse.hpp"

using namespace palsim;

TEST_SUITE_BEGIN("palette");

TEST_CASE("identical palettes") {
    Graph g = gen_disjoint_cliques(2, 4);
    PaletteSystem p = make_palette(g, PaletteMode::Identical, 5, 1);
    CHECK(p.gamma_size == 5);
    for (Vertex v = 0; v < g.n(); ++v) {
        REQUIRE(p.S[v].size() == 5);
        for (int c = 0; c < 5; ++c) CHECK(p.S[v][c] == c);
    }
    CHECK_THROWS_AS(make_palette(g, PaletteMode::Identical, 3, 1), GraphError);
}

TEST_CASE("window palettes start at zero") {
    Graph g = gen_random_regular(40, 4, 2);
    PaletteSystem p = make_palette(g, PaletteMode::Windows, 10, 1);
    CHECK(p.S[0].front() == 0);
    CHECK(p.S[0].back() == 4);
    CHECK(p.gamma_size == 10);
    // every color id used somewhere
    std::set<Color> used;
    for (const auto& s : p.S) used.insert(s.begin(), s.end());
    CHECK(static_cast<int>(used.size()) == p.gamma_size);
}

TEST_CASE("random-wide marginal matches the uniform-subset law") {
    Graph g = gen_random_regular(200, 9, 4);
    const int gamma = 10 * 10;
    int hits = 0;
    const int draws = 500;  // 500 palettes x 200 vertices = 1e5 lists
    const Color probe = 7;
    for (int r = 0; r < draws; ++r) {
        PaletteSystem p = make_palette(g, PaletteMode::RandomWide, gamma, 1000 + r);
        for (Vertex v = 0; v < g.n(); ++v)
            if (p.in_S(v, probe)) ++hits;
    }
    const double total = static_cast<double>(draws) * g.n();
    const double want = 10.0 / 100.0;
    const double se = std::sqrt(want * (1 - want) / total);
    CHECK(std::abs(hits / total - want) < 3 * se);
}

TEST_CASE("sample_lists full and singleton") {
    Graph g = gen_disjoint_cliques(1, 4);
    PaletteSystem p = make_palette(g, PaletteMode::Identical, 5, 1);
    ListSample full = sample_lists(p, 5, 99);
    for (Vertex v = 0; v < g.n(); ++v) CHECK(full.L[v] == p.S[v]);

    // singleton marginal ~ uniform over the 5 colors
    int count0 = 0;
    const int draws = 20000;
    for (int r = 0; r < draws; ++r) {
        ListSample one = sample_lists(p, 1, 7000 + r);
        if (one.L[0][0] == 0) ++count0;
    }
    const double phat = static_cast<double>(count0) / draws;
    const double se = std::sqrt(0.2 * 0.8 / draws);
    CHECK(std::abs(phat - 0.2) < 4 * se);

    CHECK_THROWS_AS(sample_lists(p, 6, 1), GraphError);
}

TEST_CASE("sample_lists restriction") {
    Graph g = gen_disjoint_cliques(1, 2);
    PaletteSystem p = make_palette(g, PaletteMode::Identical, 3, 1);
    std::vector<std::vector<Color>> restriction{{0, 1}, {1, 2}, {0, 2}};
    ListSample ls = sample_lists(p, 2, 5, &restriction);
    for (Vertex v = 0; v < 3; ++v) CHECK(ls.L[v] == restriction[v]);
    restriction[0] = {1};
    CHECK_THROWS_AS(sample_lists(p, 2, 5, &restriction), GraphError);
}

TEST_CASE("sample marginal ell over |S_v|") {
    // P(gamma in L_v) = ell/(D+1) within 4 standard errors
    Graph g = gen_disjoint_cliques(1, 9);
    PaletteSystem p = make_palette(g, PaletteMode::Identical, 10, 1);
    const int ell = 3;
    const int draws = 12000;  // x10 vertices = 1.2e5 samples
    int hits = 0;
    for (int r = 0; r < draws; ++r) {
        ListSample ls = sample_lists(p, ell, 31000 + r);
        for (Vertex v = 0; v < g.n(); ++v)
            if (ls.in_L(v, 4)) ++hits;
    }
    const double total = static_cast<double>(draws) * g.n();
    const double want = ell / 10.0;
    const double se = std::sqrt(want * (1 - want) / total);
    CHECK(std::abs(hits / total - want) < 4 * se);
}

TEST_CASE("color degrees") {
    Graph g = gen_disjoint_cliques(1, 3);
    PaletteSystem p = make_palette(g, PaletteMode::Identical, 4, 1);
    for (Vertex v = 0; v < 4; ++v)
        for (Color c = 0; c < 4; ++c) CHECK(color_degree_S(g, p, v, c) == 3);

    PaletteSystem wide = make_palette(g, PaletteMode::RandomWide, 40, 8);
    for (Vertex v = 0; v < 4; ++v)
        for (Color c = 0; c < wide.gamma_size; ++c) {
            int brute = 0;
            for (Vertex w : g.neighbors(v))
                if (wide.in_S(w, c)) ++brute;
            CHECK(color_degree_S(g, wide, v, c) == brute);
        }

    ListSample ls = sample_lists(wide, 2, 3);
    for (Vertex v = 0; v < 4; ++v)
        for (Color c = 0; c < wide.gamma_size; ++c) {
            int brute = 0;
            for (Vertex w : g.neighbors(v))
                if (ls.in_L(w, c)) ++brute;
            CHECK(color_degree_L(g, ls, v, c) == brute);
        }
}

TEST_CASE("params derived identities") {
    Params p = Params::make(1.0, 0.1);
    CHECK(p.theta == doctest::Approx(std::exp(-9.0)).epsilon(1e-15));
    CHECK(p.rho == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p.nu0 == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(p.vartheta == doctest::Approx(0.005).epsilon(1e-15));
    CHECK(p.vartheta_prime ==
          doctest::Approx(std::exp(-3.0) * 0.01 / 8.0).epsilon(1e-15));

    p.delta = 2.0;
    p.eps = 0.2;
    p.derive();
    CHECK(p.theta == doctest::Approx(std::exp(-4.5)).epsilon(1e-15));
    CHECK(p.rho == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p.vartheta == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(p.zeta0(25) == doctest::Approx(std::sqrt(0.2) / 25).epsilon(1e-15));
    CHECK(p.popular_threshold(25) == doctest::Approx(25 / 1.2).epsilon(1e-15));
}

TEST_CASE("palette and list text emission") {
    Graph g = gen_disjoint_cliques(1, 2);
    PaletteSystem p = make_palette(g, PaletteMode::Identical, 3, 1);
    std::ostringstream os;
    write_palette(os, p);
    CHECK(os.str().substr(0, 6) == "3 3 2\n");
    CHECK(os.str().find("0: 0 1 2") != std::string::npos);

    ListSample ls = sample_lists(p, 2, 9);
    std::ostringstream ls_os;
    write_lists(ls_os, ls);
    CHECK(ls_os.str().substr(0, 6) == "3 2 9\n");
}

TEST_CASE("two-step delta form guards its precondition") {
    Graph g = gen_disjoint_cliques(1, 3);
    PaletteSystem p = make_palette(g, PaletteMode::Identical, 4, 1);
    // 0.1 * delta * log 4 < 1 for delta = 1
    CHECK_THROWS_AS(two_step_assign(g, p, 1.0, 5), GraphError);
    auto ta = two_step_assign(g, p, 10.0, 5);  // ell0 = floor(1.386) = 1
    REQUIRE(ta.first_lists.has_value());
    CHECK(ta.first_lists->ell == 1);
    for (Vertex v = 0; v < g.n(); ++v)
        CHECK(ta.tau[v] == ta.first_lists->L[v][0]);
}

TEST_CASE("palette determinism") {
    Graph g = gen_random_regular(60, 5, 12);
    PaletteSystem a = make_palette(g, PaletteMode::RandomWide, 30, 9);
    PaletteSystem b = make_palette(g, PaletteMode::RandomWide, 30, 9);
    CHECK(a.S == b.S);
    ListSample la = sample_lists(a, 3, 4);
    ListSample lb = sample_lists(b, 3, 4);
    CHECK(la.L == lb.L);
}

TEST_SUITE_END();
