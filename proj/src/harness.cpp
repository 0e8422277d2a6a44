#include "palsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "palsim/decomposition.hpp"
#include "palsim/list_coloring.hpp"
#include "palsim/rng.hpp"

namespace palsim {

namespace {

const char* palette_mode_name(PaletteMode m) {
    switch (m) {
        case PaletteMode::Identical: return "identical";
        case PaletteMode::Windows: return "windows";
        case PaletteMode::RandomWide: return "random-wide";
    }
    return "?";
}

// Extends a palette to cover padding vertices added by regularize.
PaletteSystem extend_palette(const PaletteSystem& p, const Graph& g_reg,
                             PaletteMode mode, std::uint64_t seed) {
    PaletteSystem out = p;
    const int width = p.degree + 1;
    out.S.resize(g_reg.n());
    for (Vertex v = static_cast<Vertex>(p.S.size()); v < g_reg.n(); ++v) {
        switch (mode) {
            case PaletteMode::Identical:
            case PaletteMode::Windows: {
                out.S[v].resize(width);
                std::iota(out.S[v].begin(), out.S[v].end(), 0);
                break;
            }
            case PaletteMode::RandomWide: {
                std::vector<Color> pool(p.gamma_size);
                std::iota(pool.begin(), pool.end(), 0);
                Rng rng(mix64(seed, 0xadd111ULL, static_cast<std::uint64_t>(v)));
                out.S[v] = rng.sample_subset(pool, width);
                std::sort(out.S[v].begin(), out.S[v].end());
                break;
            }
        }
    }
    return out;
}

}  // namespace

TrialRecord run_pipeline(const Graph& g, const PaletteSystem& p, int ell,
                         std::uint64_t seed, const PipelineConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.seed = seed;
    rec.ell = ell;
    rec.mode = "pipeline";
    rec.palette_mode = palette_mode_name(config.palette_mode);
    const int d = p.degree;
    if (ell > d + 1) throw GraphError("ell exceeds D+1");

    const Graph* work = &g;
    Graph regularized;
    PaletteSystem extended;
    const PaletteSystem* pal = &p;
    if (!g.is_regular(d)) {
        regularized = regularize(g, d);
        extended = extend_palette(p, regularized, config.palette_mode,
                                  mix64(seed, 0x9a1e77eULL));
        work = &regularized;
        pal = &extended;
    }

    Decomposition dec = decompose(*work, config.params.eps);
    ListSample lists = sample_lists(*pal, ell, mix64(seed, 0x11575ULL));

    // Sparse phase with tau/xi redraw retries (lists stay fixed). tau_v is
    // a uniform member of L_v (the first installment of the single L draw),
    // which makes its marginal uniform on S_v. A uniform element of a
    // uniform subset is again uniform, so the one-shot and two-step
    // samplers induce the same trial law here; the flag is metadata.
    std::vector<Color> sigma;
    bool sparse_ok = false;
    SparseCompletion completion;
    RetainedColoring rc;
    for (int attempt = 0; attempt <= config.sparse_retries; ++attempt) {
        ++rec.sparse_attempts;
        const std::uint64_t tau_seed =
            mix64(seed, 0x7a75e3dULL, static_cast<std::uint64_t>(attempt));
        TentativeAssignment ta;
        ta.seed = tau_seed;
        ta.tau.resize(work->n());
        ta.xi.resize(work->n());
        for (Vertex v = 0; v < work->n(); ++v) {
            Rng r(mix64(tau_seed, 0x1a0ULL, static_cast<std::uint64_t>(v)));
            ta.tau[v] = lists.L[v][r.below(lists.L[v].size())];
            const int dg = color_degree_S(*work, *pal, v, ta.tau[v]);
            Rng rx(mix64(tau_seed, 0x0db5a11ULL, static_cast<std::uint64_t>(v)));
            ta.xi[v] = rx.bernoulli(std::pow(zhat(d), d - dg)) ? 1 : 0;
        }
        rc = retained_set(*work, ta);
        completion =
            complete_sparse(*work, *pal, dec, rc, lists, ta, config.strategy,
                            mix64(seed, 0xc0117e7eULL), config.node_budget,
                            config.restarts);
        if (config.collect_sparse_diag)
            rec.sparse_diag_json = sparse_diagnostics_json(sparse_diagnostics(
                *work, *pal, dec, rc, ta, config.params.vartheta));
        if (completion.ok) {
            sparse_ok = true;
            break;
        }
    }
    rec.retained_size = static_cast<int>(rc.T.size());
    rec.retained_frac =
        work->n() ? static_cast<double>(rc.T.size()) / work->n() : 0.0;
    if (!sparse_ok) {
        rec.stage = "sparse";
        rec.detail = "completion failed at vertex " +
                     std::to_string(completion.failed_vertex) +
                     " (residual " +
                     std::to_string(completion.failed_residual_size) + ")";
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return rec;
    }

    sigma = completion.colors;  // colors on V*, -1 elsewhere

    // Dense phase, clusters one at a time against the growing sigma.
    for (std::size_t ci = 0; ci < dec.clusters.size(); ++ci) {
        ClusterColoring cc = color_cluster(
            *work, *pal, sigma, dec.clusters[ci], lists, config.params, ell,
            mix64(seed, 0xc157e2ULL, static_cast<std::uint64_t>(ci)));
        rec.cluster_routes.push_back(cc.route.empty() ? "failed" : cc.route);
        if (config.collect_traces)
            rec.cluster_traces.push_back(cluster_trace_json(cc, ci));
        if (cc.used_fallback) ++rec.clusters_fallback;
        if (!cc.ok) {
            rec.stage = "dense";
            rec.detail = "cluster " + std::to_string(ci) + ": " + cc.failure;
            rec.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
            return rec;
        }
        for (auto& [v, c] : cc.colors) sigma[v] = c;
    }

    rec.success = true;
    rec.coloring.assign(sigma.begin(), sigma.begin() + g.n());
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

SolveResult solve_direct(const Graph& g,
                         const std::vector<std::vector<Color>>& lists,
                         std::uint64_t node_budget, int restarts,
                         std::uint64_t seed) {
    SolveResult out;
    out.coloring.assign(g.n(), -1);

    // connected components solve independently; an unsatisfiable component
    // settles the whole instance
    std::vector<int> comp(g.n(), -1);
    int ncomp = 0;
    for (Vertex s = 0; s < g.n(); ++s) {
        if (comp[s] != -1) continue;
        std::vector<Vertex> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(v))
                if (comp[w] == -1) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }
    std::vector<std::vector<Vertex>> members(ncomp);
    for (Vertex v = 0; v < g.n(); ++v) members[comp[v]].push_back(v);

    const int tries = std::max(restarts, 1);
    const std::uint64_t slice =
        std::max<std::uint64_t>(node_budget / tries, 1);
    for (int c = 0; c < ncomp; ++c) {
        std::vector<std::vector<Color>> sub;
        sub.reserve(members[c].size());
        for (Vertex v : members[c]) sub.push_back(lists[v]);
        bool colored = false;
        for (int r = 0; r < tries && !colored; ++r) {
            ListColoringEngine engine(g, members[c], sub);
            if (r > 0)
                engine.shuffle_value_order(mix64(seed, 0x50177eULL, r));
            auto res = engine.solve(r + 1 == tries ? node_budget : slice);
            out.nodes += engine.nodes();
            if (res == ListColoringEngine::Result::Colored) {
                colored = true;
                for (std::size_t i = 0; i < members[c].size(); ++i)
                    out.coloring[members[c][i]] = engine.assignment()[i];
            } else if (res == ListColoringEngine::Result::Exhausted) {
                out.status = SolveStatus::Unsatisfiable;
                out.coloring.clear();
                return out;
            }
        }
        if (!colored) {
            out.status = SolveStatus::Inconclusive;
            out.coloring.clear();
            return out;
        }
    }
    out.status = SolveStatus::Colored;
    return out;
}

bool exact_list_colorable(const Graph& g,
                          const std::vector<std::vector<Color>>& lists) {
    double log_space = 0.0;
    for (const auto& l : lists) log_space += std::log(std::max<double>(1, l.size()));
    if (g.n() > 40 && log_space > std::log(1e8))
        throw GraphError("exact_list_colorable: instance too large for an exact answer");
    std::vector<Vertex> targets(g.n());
    std::iota(targets.begin(), targets.end(), 0);
    ListColoringEngine engine(g, targets, lists);
    const auto res = engine.solve(~std::uint64_t{0});
    return res == ListColoringEngine::Result::Colored;
}

bool validate_coloring(const Graph& g,
                       const std::vector<std::vector<Color>>& lists,
                       const std::vector<Color>& coloring) {
    if (static_cast<int>(coloring.size()) < g.n()) return false;
    for (Vertex v = 0; v < g.n(); ++v) {
        if (coloring[v] < 0) return false;
        if (!std::binary_search(lists[v].begin(), lists[v].end(), coloring[v]))
            return false;
        for (Vertex w : g.neighbors(v))
            if (coloring[w] == coloring[v]) return false;
    }
    return true;
}

std::pair<double, double> wilson_interval(int k, int n) {
    if (n == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double p = static_cast<double>(k) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct CellResult {
    bool success = false;
    std::string stage;
};

int ell_for(double c, int n, int degree) {
    const int ell = static_cast<int>(std::llround(c * std::log(static_cast<double>(n))));
    return std::max(1, std::min(degree + 1, ell));
}

CellResult run_cell(const ExperimentConfig& config, double c, int probe_idx,
                    int trial) {
    const std::uint64_t cell_seed =
        mix64(config.master_seed, static_cast<std::uint64_t>(trial),
              static_cast<std::uint64_t>(probe_idx));
    GeneratorSpec gspec = config.graph;
    gspec.seed = mix64(cell_seed, 0x96afULL);
    Graph g = generate(gspec);
    const int d = g.max_degree_bound();
    const int gamma = config.gamma_size > 0 ? config.gamma_size : d + 1;
    PaletteSystem p =
        make_palette(g, config.palette_mode, gamma, mix64(cell_seed, 0xa17ULL));
    const int ell = ell_for(c, g.n(), d);

    CellResult out;
    if (config.mode == "solver") {
        ListSample lists = sample_lists(p, ell, mix64(cell_seed, 0x11575ULL));
        SolveResult res =
            solve_direct(g, lists.L, config.pipeline.node_budget,
                         config.pipeline.restarts, mix64(cell_seed, 0xd17ec7ULL));
        out.success = res.status == SolveStatus::Colored;
        if (res.status == SolveStatus::Unsatisfiable) out.stage = "unsat";
        if (res.status == SolveStatus::Inconclusive) out.stage = "inconclusive";
    } else {
        PipelineConfig pc = config.pipeline;
        pc.palette_mode = config.palette_mode;
        TrialRecord rec = run_pipeline(g, p, ell, cell_seed, pc);
        out.success = rec.success;
        out.stage = rec.stage;
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.trials < 1) throw GraphError("trials must be >= 1");
    for (std::size_t i = 1; i < config.c_grid.size(); ++i)
        if (config.c_grid[i] <= config.c_grid[i - 1])
            throw GraphError("c-grid must be strictly increasing");

    struct Cell {
        int probe;
        int trial;
    };
    std::vector<Cell> cells;
    for (std::size_t pi = 0; pi < config.c_grid.size(); ++pi)
        for (int t = 0; t < config.trials; ++t)
            cells.push_back({static_cast<int>(pi), t});

    // one reference instance fixes n and D for the ell column
    GeneratorSpec ref = config.graph;
    ref.seed = mix64(config.master_seed, 0, 0);
    const Graph g_ref = generate(ref);
    const int n_ref = g_ref.n();
    const int d_ref = g_ref.max_degree_bound();

    std::vector<CellResult> results(cells.size());
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            results[i] = run_cell(config, config.c_grid[cells[i].probe],
                                  cells[i].probe, cells[i].trial);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    results[i] = run_cell(config, config.c_grid[cells[i].probe],
                                          cells[i].probe, cells[i].trial);
                }
            });
        for (auto& th : pool) th.join();
    }

    ExperimentResult out;
    std::ostringstream csv;
    csv << "row,c,ell,trial,seed,success,stage\n";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double c = config.c_grid[cells[i].probe];
        TrialRow row;
        row.c = c;
        row.trial = cells[i].trial;
        row.seed = mix64(config.master_seed,
                         static_cast<std::uint64_t>(cells[i].trial),
                         static_cast<std::uint64_t>(cells[i].probe));
        row.success = results[i].success;
        row.stage = results[i].stage;
        row.ell = ell_for(c, n_ref, d_ref);
        out.rows.push_back(row);
        csv << "trial," << c << ',' << row.ell << ',' << row.trial << ','
            << row.seed << ',' << (row.success ? 1 : 0) << ',' << row.stage
            << '\n';
    }
    for (std::size_t pi = 0; pi < config.c_grid.size(); ++pi) {
        AggregateRow agg;
        agg.c = config.c_grid[pi];
        agg.trials = config.trials;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i].probe == static_cast<int>(pi) && results[i].success)
                ++agg.successes;
        agg.rate = static_cast<double>(agg.successes) / config.trials;
        auto [lo, hi] = wilson_interval(agg.successes, agg.trials);
        agg.wilson_lo = lo;
        agg.wilson_hi = hi;
        agg.ell = out.rows[pi * config.trials].ell;
        out.aggregates.push_back(agg);
        csv << "agg," << agg.c << ',' << agg.ell << ',' << agg.trials << ','
            << agg.successes << ',' << agg.rate << ',' << agg.wilson_lo << ','
            << agg.wilson_hi << '\n';
    }
    out.csv = csv.str();
    if (!config.out_path.empty()) {
        std::ofstream os(config.out_path);
        if (!os) throw GraphError("cannot write " + config.out_path);
        os << out.csv;
    }
    return out;
}

ThresholdResult estimate_threshold(const ExperimentConfig& config,
                                   double target_rate) {
    if (config.c_grid.size() < 2)
        throw GraphError("threshold estimation needs a c-grid of >= 2 points");
    ThresholdResult out;

    int probe_counter = 0;
    auto rate_at = [&](double c) {
        int successes = 0;
        const int pi = 1000 + probe_counter++;  // distinct seed lane per probe
        for (int t = 0; t < config.trials; ++t)
            if (run_cell(config, c, pi, t).success) ++successes;
        const double rate = static_cast<double>(successes) / config.trials;
        out.probes.push_back({c, rate});
        return rate;
    };

    std::vector<double> rates;
    for (double c : config.c_grid) rates.push_back(rate_at(c));
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (rates[i] < rates[i - 1]) out.nonmonotone_grid = true;

    if (target_rate <= 0.0) {
        out.c_star = config.c_grid.front();
        return out;
    }

    // bracket on running-max smoothed rates so a noisy dip cannot split
    // the grid into several crossings
    std::vector<double> smoothed = rates;
    for (std::size_t i = 1; i < smoothed.size(); ++i)
        smoothed[i] = std::max(smoothed[i], smoothed[i - 1]);
    int lo_idx = -1;
    for (std::size_t i = 0; i + 1 < smoothed.size(); ++i)
        if (smoothed[i] < target_rate && smoothed[i + 1] >= target_rate) {
            lo_idx = static_cast<int>(i);
            break;
        }
    if (lo_idx < 0) {
        if (rates.front() >= target_rate) {
            out.c_star = config.c_grid.front();
            return out;
        }
        throw GraphError("c-grid does not bracket the target rate; widen it");
    }

    double lo = config.c_grid[lo_idx], hi = config.c_grid[lo_idx + 1];
    while (hi - lo > 0.05) {
        const double mid = 0.5 * (lo + hi);
        if (rate_at(mid) >= target_rate)
            hi = mid;
        else
            lo = mid;
    }
    out.c_star = 0.5 * (lo + hi);
    return out;
}

std::string sparse_diagnostics_json(const SparseDiagnostics& diag) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    auto branch_name = [](SlackBranch b) {
        switch (b) {
            case SlackBranch::Fraternal: return "fraternal";
            case SlackBranch::Alien: return "alien";
            case SlackBranch::Both: return "both";
            case SlackBranch::Neither: return "neither";
        }
        return "?";
    };
    for (const auto& vd : diag.per_vertex) {
        nlohmann::ordered_json e;
        e["t_in_nbhd"] = vd.t_in_nbhd;
        e["slack"] = vd.slack;
        e["F"] = vd.f_size;
        e["A"] = vd.a_size;
        e["branch"] = branch_name(vd.branch);
        e["fraternal_realized"] = vd.fraternal_realized;
        e["alien_realized"] = vd.alien_realized;
        j[std::to_string(vd.v)] = e;
    }
    return j.dump();
}

std::string cluster_trace_json(const ClusterColoring& cc, std::size_t index) {
    nlohmann::ordered_json j;
    j["cluster"] = index;
    j["route"] = cc.route;
    j["ok"] = cc.ok;
    j["used_fallback"] = cc.used_fallback;
    j["trim_flagged"] = cc.trim_flagged;
    j["regime"]["zeta_large"] = cc.regime.zeta_large;
    j["regime"]["zeta0"] = cc.regime.zeta0;
    j["regime"]["r1"] = cc.regime.r1;
    j["regime"]["r1_lhs"] = cc.regime.r1_lhs;
    j["regime"]["r1_threshold"] = cc.regime.r1_threshold;
    j["regime"]["ssize"] = cc.regime.ssize;
    j["regime"]["s"] = cc.regime.s;
    j["regime"]["ssize_threshold"] = cc.regime.ssize_threshold;
    j["regime"]["popular_count"] = cc.regime.popular_count;
    j["regime"]["p_bound_ok"] = cc.regime.p_bound_ok;
    j["regime"]["r2_implies_ssize_ok"] = cc.regime.r2_implies_ssize_ok;
    if (!cc.failure.empty()) j["failure"] = cc.failure;
    if (cc.process_ran) {
        j["process"]["m"] = cc.process.params.m;
        j["process"]["eta"] = cc.process.params.eta;
        j["process"]["q"] = cc.process.params.q;
        j["process"]["K"] = cc.process.params.big_k;
        j["process"]["s1"] = cc.process.s1;
        j["process"]["s2"] = cc.process.s2;
        j["process"]["s3"] = cc.process.s3;
        j["process"]["succeeded"] = cc.process.succeeded;
        j["process"]["ordering_audit_ok"] = cc.process.ordering_audit_ok;
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const auto& st : cc.process.steps) {
            nlohmann::ordered_json s;
            s["i"] = st.i;
            s["gamma"] = st.gamma;
            s["J"] = st.j_size;
            s["action"] = process_action_name(st.action);
            if (st.action == 1) s["removed"] = {st.x, st.y};
            if (st.action == 2) s["removed"] = {st.z};
            steps.push_back(s);
        }
        j["process"]["steps"] = steps;
    }
    return j.dump();
}

std::string trial_record_json(const TrialRecord& rec) {
    nlohmann::ordered_json j;
    j["trial_id"] = rec.trial_id;
    j["master_seed"] = rec.master_seed;
    j["seed"] = rec.seed;
    j["graph"] = rec.graph_desc;
    j["palette_mode"] = rec.palette_mode;
    j["ell"] = rec.ell;
    j["mode"] = rec.mode;
    j["outcome"]["success"] = rec.success;
    j["outcome"]["stage"] = rec.stage;
    j["outcome"]["detail"] = rec.detail;
    j["retained"]["size"] = rec.retained_size;
    j["retained"]["frac"] = rec.retained_frac;
    j["sparse_attempts"] = rec.sparse_attempts;
    j["cluster_routes"] = rec.cluster_routes;
    j["clusters_fallback"] = rec.clusters_fallback;
    j["wall_ms"] = rec.wall_ms;
    if (!rec.cluster_traces.empty()) {
        nlohmann::ordered_json traces = nlohmann::ordered_json::array();
        for (const auto& t : rec.cluster_traces)
            traces.push_back(nlohmann::ordered_json::parse(t));
        j["clusters"] = traces;
    }
    return j.dump();
}

}  // namespace palsim
