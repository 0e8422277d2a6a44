#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "palsim/dense.hpp"
#include "palsim/generators.hpp"
#include "palsim/graph.hpp"
#include "palsim/palette.hpp"
#include "palsim/sparse.hpp"

namespace palsim {

struct PipelineConfig {
    Params params = Params::make(1.0, 0.1);
    SparseStrategy strategy = SparseStrategy::Backtrack;
    int sparse_retries = 3;
    std::uint64_t node_budget = 1'000'000;
    int restarts = 20;
    PaletteMode palette_mode = PaletteMode::Identical;  // for padding vertices
    bool two_step = false;       // metadata: the two-step sampler's trial law
                                 // coincides with the one-shot sampler here
    bool collect_traces = false; // keep per-cluster regime/process JSON
    bool collect_sparse_diag = false;  // keep per-vertex sparse diagnostics
};

struct TrialRecord {
    int trial_id = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t seed = 0;
    std::string graph_desc;
    std::string palette_mode;
    int ell = 0;
    std::string mode;  // "pipeline" | "solver"

    bool success = false;
    std::string stage;   // failing stage, empty on success
    std::string detail;

    int retained_size = 0;
    double retained_frac = 0.0;
    int sparse_attempts = 0;
    std::vector<std::string> cluster_routes;
    int clusters_fallback = 0;
    double wall_ms = 0.0;

    std::vector<Color> coloring;  // full coloring on success
    std::vector<std::string> cluster_traces;  // JSON, when collect_traces
    std::string sparse_diag_json;  // JSON keyed by vertex, when requested
};

// JSON trace of one cluster attempt: regime report plus process steps.
std::string cluster_trace_json(const ClusterColoring& cc, std::size_t index);

// Per-vertex sparse diagnostics as one JSON object keyed by vertex id.
std::string sparse_diagnostics_json(const SparseDiagnostics& diag);

// The two-stage pipeline: regularize if needed, decompose, sample lists,
// sparse phase (tentative/retained/complete, with tau-xi redraw retries),
// then the dense phase cluster by cluster. Deterministic per seed.
TrialRecord run_pipeline(const Graph& g, const PaletteSystem& p, int ell,
                         std::uint64_t seed, const PipelineConfig& config);

enum class SolveStatus { Colored, Unsatisfiable, Inconclusive };

struct SolveResult {
    SolveStatus status = SolveStatus::Inconclusive;
    std::vector<Color> coloring;
    std::uint64_t nodes = 0;
};

// Proof-agnostic list-coloring search: most-constrained-vertex
// backtracking under a node budget, with value-order restarts.
SolveResult solve_direct(const Graph& g, const std::vector<std::vector<Color>>& lists,
                         std::uint64_t node_budget = 1'000'000, int restarts = 20,
                         std::uint64_t seed = 0);

// Exhaustive ground truth; refuses oversized instances instead of guessing.
bool exact_list_colorable(const Graph& g,
                          const std::vector<std::vector<Color>>& lists);

bool validate_coloring(const Graph& g, const std::vector<std::vector<Color>>& lists,
                       const std::vector<Color>& coloring);

struct ExperimentConfig {
    GeneratorSpec graph;
    PaletteMode palette_mode = PaletteMode::Identical;
    int gamma_size = 0;  // 0: D+1
    std::vector<double> c_grid;  // ell = c log n
    int trials = 100;
    std::string mode = "solver";  // or "pipeline"
    int jobs = 1;
    std::uint64_t master_seed = 1;
    PipelineConfig pipeline;
    std::string out_path;
};

struct TrialRow {
    double c = 0.0;
    int ell = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    bool success = false;
    std::string stage;
};

struct AggregateRow {
    double c = 0.0;
    int ell = 0;
    int trials = 0;
    int successes = 0;
    double rate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
};

struct ExperimentResult {
    std::vector<TrialRow> rows;
    std::vector<AggregateRow> aggregates;
    std::string csv;  // frozen schema, byte-deterministic per master seed
};

// Wilson 95% interval endpoints for k successes out of n.
std::pair<double, double> wilson_interval(int k, int n);

ExperimentResult run_experiment(const ExperimentConfig& config);

struct ThresholdProbe {
    double c = 0.0;
    double rate = 0.0;
};

struct ThresholdResult {
    double c_star = 0.0;
    std::vector<ThresholdProbe> probes;
    bool nonmonotone_grid = false;
};

// Bisection for the smallest c with success rate >= target_rate, to
// interval width 0.05. The grid must bracket the target.
ThresholdResult estimate_threshold(const ExperimentConfig& config,
                                   double target_rate);

// JSON serialization of a trial record (one object, stable key order).
std::string trial_record_json(const TrialRecord& rec);

}  // namespace palsim
