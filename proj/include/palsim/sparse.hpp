#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "palsim/decomposition.hpp"
#include "palsim/graph.hpp"
#include "palsim/palette.hpp"

namespace palsim {

// zhat = 1 - 1/(D+1), the per-neighbor survival factor.
inline double zhat(int degree) { return 1.0 - 1.0 / (degree + 1.0); }

struct TentativeAssignment {
    std::vector<Color> tau;  // tau_v in S_v
    std::vector<char> xi;
    std::uint64_t seed = 0;
    std::optional<ListSample> first_lists;  // L^0 of the two-step variant
};

struct RetainedColoring {
    std::vector<char> in_T;
    std::vector<Vertex> T;      // sorted
    std::vector<Color> sigma;   // color for T members, -1 elsewhere
};

// tau_v uniform on S_v; xi_v Bernoulli(zhat^{D - d_gamma(v)}) given
// tau_v = gamma, with d_gamma over base lists; independent across vertices.
TentativeAssignment tentative_assign(const Graph& g, const PaletteSystem& p,
                                     std::uint64_t seed);

// Large-n variant: L0_v a uniform ell0-subset of S_v, tau_v uniform on
// L0_v, xi as above. ell0 = floor(0.1 * delta * log n), must be >= 1.
TentativeAssignment two_step_assign(const Graph& g, const PaletteSystem& p,
                                    double delta, std::uint64_t seed);
TentativeAssignment two_step_assign_ell0(const Graph& g, const PaletteSystem& p,
                                         int ell0, std::uint64_t seed);

// T = {v : xi_v = 1 and tau_w != tau_v for all w ~ v}; sigma = tau on T.
RetainedColoring retained_set(const Graph& g, const TentativeAssignment& ta);

// F_v = {(u,w,gamma) : uw a nonedge inside N_v, gamma in S_u n S_w}, u < w.
std::vector<std::tuple<Vertex, Vertex, Color>> fraternal_pairs(
    const Graph& g, const PaletteSystem& p, Vertex v);
// A_v = {(w,gamma) : w ~ v, gamma in S_w \ S_v}.
std::vector<std::pair<Vertex, Color>> alien_pairs(const Graph& g,
                                                  const PaletteSystem& p,
                                                  Vertex v);
// Cardinalities of the above without materializing.
std::int64_t fraternal_count(const Graph& g, const PaletteSystem& p, Vertex v);
std::int64_t alien_count(const Graph& g, const PaletteSystem& p, Vertex v);

enum class SlackBranch { Fraternal, Alien, Both, Neither };

// Which of |F_v| >= vartheta D^3/2, |A_v| >= vartheta D^2/2 hold. "Neither"
// with nonedge witness >= vartheta D^2 would contradict the dichotomy and
// is reported as-is for tests to flag.
SlackBranch sparse_dichotomy(const Graph& g, const PaletteSystem& p, Vertex v,
                             double vartheta);

// Counts of realized fraternal events E^v_{uw,gamma} and alien events
// K_{w,gamma}; each is a certified lower bound on the slack at v.
std::pair<int, int> realized_events(const Graph& g, const PaletteSystem& p,
                                    const RetainedColoring& rc,
                                    const TentativeAssignment& ta, Vertex v);

// Closed form sum of P(E^v_{uw,gamma}) over F_v.
double expected_fraternal_events(const Graph& g, const PaletteSystem& p, Vertex v);

struct VertexDiagnostics {
    Vertex v = 0;
    int t_in_nbhd = 0;       // |T n N_v|
    int slack = 0;           // |T n N_v| - |sigma(T n N_v) n S_v|
    std::int64_t f_size = 0;
    std::int64_t a_size = 0;
    SlackBranch branch = SlackBranch::Neither;
    int fraternal_realized = 0;
    int alien_realized = 0;
};

struct SparseDiagnostics {
    std::vector<VertexDiagnostics> per_vertex;  // V* vertices only
};

SparseDiagnostics sparse_diagnostics(const Graph& g, const PaletteSystem& p,
                                     const Decomposition& dec,
                                     const RetainedColoring& rc,
                                     const TentativeAssignment& ta,
                                     double vartheta);

// Pass iff |T n N_v| within (1 +- tol) e^{-1} D and slack > vartheta' D.
std::vector<bool> check_targets(const SparseDiagnostics& diag, int degree,
                                double vartheta_prime, double tol);

enum class SparseStrategy { Greedy, Backtrack, Restart };

struct SparseCompletion {
    bool ok = false;
    std::vector<Color> colors;  // colors of all V* vertices, -1 elsewhere
    Vertex failed_vertex = -1;
    int failed_residual_size = -1;
    std::uint64_t nodes_explored = 0;
};

// Colors V* \ T from residual lists (L_v minus tau_v minus colors retained
// on neighbors); retained V* vertices keep tau. Failure is a diagnostic.
SparseCompletion complete_sparse(const Graph& g, const PaletteSystem& p,
                                 const Decomposition& dec,
                                 const RetainedColoring& rc,
                                 const ListSample& lists,
                                 const TentativeAssignment& ta,
                                 SparseStrategy strategy,
                                 std::uint64_t seed = 0,
                                 std::uint64_t node_budget = 1'000'000,
                                 int restarts = 20);

}  // namespace palsim
