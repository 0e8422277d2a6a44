// palsim: palette-sparsification coloring lab.
//
// Subcommands: gen, decompose, color, experiment, threshold, oracle.
// Exit code 0 on a clean run (algorithmic failure is recorded output, not
// an error); nonzero only for configuration or I/O problems.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include "palsim/decomposition.hpp"
#include "palsim/harness.hpp"
#include "palsim/rng.hpp"

using namespace palsim;

namespace {

struct CommonOpts {
    std::string graph_file;
    std::string family = "random-regular";
    int m = 1;
    int n = 100;
    int degree = 10;
    std::uint64_t seed = 1;
    std::string palette_mode = "identical";
    int gamma_size = 0;
    int ell = 0;
    double ell_factor = 2.0;
    double delta = 1.0;
    double eps = 0.1;
    std::string mode = "pipeline";
    std::string sparse_strategy = "backtrack";
    int trials = 100;
    int jobs = 1;
    std::string out;
};

void add_graph_flags(CLI::App* cmd, CommonOpts& o) {
    // repeated flags take the last value, so config-file options injected
    // ahead of the command line are overridden by explicit flags
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--graph", o.graph_file, "read the graph from a file");
    cmd->add_option("--family", o.family,
                    "cliques | random-regular | hybrid (ignored with --graph)");
    cmd->add_option("--m-cliques", o.m, "number of planted cliques");
    cmd->add_option("--n", o.n, "vertex count (sparse count for hybrid)");
    cmd->add_option("--d-degree", o.degree, "degree bound D");
    cmd->add_option("--seed", o.seed, "master seed");
}

void add_palette_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--palette-mode", o.palette_mode,
                    "identical | windows | random-wide");
    cmd->add_option("--gamma-size", o.gamma_size, "|Gamma| (default D+1)");
    cmd->add_option("--ell", o.ell, "list size (overrides --ell-factor)");
    cmd->add_option("--ell-factor", o.ell_factor, "ell = factor * log n");
    cmd->add_option("--delta", o.delta, "delta parameter");
    cmd->add_option("--eps", o.eps, "decomposition eps");
}

GeneratorSpec spec_from(const CommonOpts& o) {
    GeneratorSpec spec;
    if (!o.graph_file.empty()) {
        spec.family = GraphFamily::ExplicitFile;
        spec.path = o.graph_file;
        return spec;
    }
    if (o.family == "cliques")
        spec.family = GraphFamily::DisjointCliques;
    else if (o.family == "random-regular")
        spec.family = GraphFamily::RandomRegular;
    else if (o.family == "hybrid")
        spec.family = GraphFamily::Hybrid;
    else
        throw CLI::ValidationError("--family", "unknown family " + o.family);
    spec.m = o.m;
    spec.n = o.n;
    spec.degree = o.degree;
    spec.seed = o.seed;
    return spec;
}

PaletteMode palette_mode_from(const std::string& name) {
    if (name == "identical") return PaletteMode::Identical;
    if (name == "windows") return PaletteMode::Windows;
    if (name == "random-wide") return PaletteMode::RandomWide;
    throw CLI::ValidationError("--palette-mode", "unknown mode " + name);
}

SparseStrategy strategy_from(const std::string& name) {
    if (name == "greedy") return SparseStrategy::Greedy;
    if (name == "backtrack") return SparseStrategy::Backtrack;
    if (name == "restart") return SparseStrategy::Restart;
    throw CLI::ValidationError("--sparse-strategy", "unknown strategy " + name);
}

int resolve_ell(const CommonOpts& o, int n, int degree) {
    if (o.ell > 0) return std::min(o.ell, degree + 1);
    const int e = static_cast<int>(
        std::llround(o.ell_factor * std::log(static_cast<double>(n))));
    return std::max(1, std::min(degree + 1, e));
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw CLI::FileError::Missing("cannot open " + path);
    return file;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        grid.push_back(std::stod(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return grid;
}

// Expands "--config FILE" into that file's key=value pairs, inserted right
// after the subcommand token so explicit flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::vector<std::string> injected;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string()
                                          : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key.rfind("--", 0) != 0) key = "--" + key;
        injected.push_back(key);
        injected.push_back(value);
    }
    if (args.empty()) return injected;
    std::vector<std::string> out;
    out.push_back(args.front());  // the subcommand
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"palette-sparsification coloring lab"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string c_grid = "0.5,1.0,1.5,2.0";
    double target_rate = 0.95;
    std::string trace_out;
    std::string json_out;

    auto* gen = app.add_subcommand("gen", "generate a graph");
    add_graph_flags(gen, o);
    gen->add_option("--out", o.out, "output file (default stdout)");

    auto* dec = app.add_subcommand("decompose", "sparse/dense decomposition");
    add_graph_flags(dec, o);
    dec->add_option("--eps", o.eps, "decomposition eps");
    dec->add_option("--out", o.out, "output file (default stdout)");

    auto* color = app.add_subcommand("color", "run a single coloring trial");
    add_graph_flags(color, o);
    add_palette_flags(color, o);
    color->add_option("--mode", o.mode, "pipeline | solver");
    color->add_option("--sparse-strategy", o.sparse_strategy,
                      "greedy | backtrack | restart");
    color->add_option("--trace-out", trace_out,
                      "write per-cluster process traces (JSON lines)");
    std::string sparse_diag_out;
    color->add_option("--sparse-diag-out", sparse_diag_out,
                      "write per-vertex sparse diagnostics (JSON)");
    color->add_option("--out", o.out, "output file (default stdout)");

    auto* exp = app.add_subcommand("experiment", "Monte Carlo sweep over ell");
    add_graph_flags(exp, o);
    add_palette_flags(exp, o);
    exp->add_option("--c-grid", c_grid, "comma-separated c values, ell = c log n");
    exp->add_option("--trials", o.trials, "trials per grid point");
    exp->add_option("--mode", o.mode, "pipeline | solver");
    exp->add_option("--jobs", o.jobs, "worker threads");
    exp->add_option("--sparse-strategy", o.sparse_strategy,
                    "greedy | backtrack | restart");
    exp->add_option("--out", o.out, "CSV output file (default stdout)");
    exp->add_option("--json-out", json_out, "JSON mirror of the CSV rows");

    auto* thr = app.add_subcommand("threshold", "bisect for the critical c");
    add_graph_flags(thr, o);
    add_palette_flags(thr, o);
    thr->add_option("--c-grid", c_grid, "bracketing grid");
    thr->add_option("--trials", o.trials, "trials per probe");
    thr->add_option("--mode", o.mode, "pipeline | solver");
    thr->add_option("--target-rate", target_rate, "success rate to locate");
    thr->add_option("--out", o.out, "output file (default stdout)");

    auto* orc = app.add_subcommand("oracle", "exact list-colorability check");
    add_graph_flags(orc, o);
    add_palette_flags(orc, o);
    orc->add_option("--out", o.out, "output file (default stdout)");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::vector<const char*> cargs{argv[0]};
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()),
                  const_cast<char**>(cargs.data()));
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (gen->parsed()) {
            Graph g = generate(spec_from(o));
            std::ofstream file;
            write_graph(open_out(file, o.out), g);
            return 0;
        }

        if (dec->parsed()) {
            Graph g = generate(spec_from(o));
            if (!g.is_regular(g.max_degree_bound()))
                g = regularize(g, g.max_degree_bound());
            Decomposition d = decompose(g, o.eps);
            std::ofstream file;
            write_decomposition(open_out(file, o.out), d);
            return 0;
        }

        if (color->parsed()) {
            Graph g = generate(spec_from(o));
            const int d = g.max_degree_bound();
            const int gamma = o.gamma_size > 0 ? o.gamma_size : d + 1;
            const PaletteMode pmode = palette_mode_from(o.palette_mode);
            PaletteSystem p = make_palette(g, pmode, gamma, mix64(o.seed, 0xa17ULL));
            const int ell = resolve_ell(o, g.n(), d);

            TrialRecord rec;
            if (o.mode == "solver") {
                ListSample ls = sample_lists(p, ell, mix64(o.seed, 0x11575ULL));
                SolveResult res = solve_direct(g, ls.L, 1'000'000, 20,
                                               mix64(o.seed, 0xd17ec7ULL));
                rec.seed = o.seed;
                rec.ell = ell;
                rec.mode = "solver";
                rec.success = res.status == SolveStatus::Colored;
                if (res.status == SolveStatus::Unsatisfiable)
                    rec.stage = "unsat";
                if (res.status == SolveStatus::Inconclusive)
                    rec.stage = "inconclusive";
                if (rec.success) rec.coloring = res.coloring;
            } else if (o.mode == "pipeline") {
                PipelineConfig pc;
                pc.params = Params::make(o.delta, o.eps);
                pc.strategy = strategy_from(o.sparse_strategy);
                pc.palette_mode = pmode;
                pc.collect_traces = !trace_out.empty();
                pc.collect_sparse_diag = !sparse_diag_out.empty();
                rec = run_pipeline(g, p, ell, o.seed, pc);
            } else {
                throw CLI::ValidationError("--mode", "unknown mode " + o.mode);
            }
            rec.master_seed = o.seed;
            rec.graph_desc = o.graph_file.empty() ? o.family : o.graph_file;
            std::ofstream file;
            open_out(file, o.out) << trial_record_json(rec) << '\n';
            if (!trace_out.empty()) {
                std::ofstream tf(trace_out);
                if (!tf) throw CLI::FileError::Missing("cannot open " + trace_out);
                for (const auto& t : rec.cluster_traces) tf << t << '\n';
            }
            if (!sparse_diag_out.empty()) {
                std::ofstream df(sparse_diag_out);
                if (!df)
                    throw CLI::FileError::Missing("cannot open " + sparse_diag_out);
                df << rec.sparse_diag_json << '\n';
            }
            return 0;
        }

        if (exp->parsed() || thr->parsed()) {
            ExperimentConfig cfg;
            cfg.graph = spec_from(o);
            cfg.palette_mode = palette_mode_from(o.palette_mode);
            cfg.gamma_size = o.gamma_size;
            cfg.c_grid = parse_grid(c_grid);
            cfg.trials = o.trials;
            cfg.mode = o.mode;
            cfg.jobs = o.jobs;
            cfg.master_seed = o.seed;
            cfg.pipeline.params = Params::make(o.delta, o.eps);
            cfg.pipeline.strategy = strategy_from(o.sparse_strategy);
            cfg.pipeline.palette_mode = cfg.palette_mode;

            if (exp->parsed()) {
                cfg.out_path = o.out;
                ExperimentResult res = run_experiment(cfg);
                if (o.out.empty()) std::cout << res.csv;
                if (!json_out.empty()) {
                    nlohmann::ordered_json j;
                    j["rows"] = nlohmann::ordered_json::array();
                    for (const auto& r : res.rows)
                        j["rows"].push_back({{"c", r.c},
                                             {"ell", r.ell},
                                             {"trial", r.trial},
                                             {"seed", r.seed},
                                             {"success", r.success},
                                             {"stage", r.stage}});
                    j["aggregates"] = nlohmann::ordered_json::array();
                    for (const auto& a : res.aggregates)
                        j["aggregates"].push_back({{"c", a.c},
                                                   {"ell", a.ell},
                                                   {"trials", a.trials},
                                                   {"successes", a.successes},
                                                   {"rate", a.rate},
                                                   {"wilson_lo", a.wilson_lo},
                                                   {"wilson_hi", a.wilson_hi}});
                    std::ofstream jf(json_out);
                    if (!jf)
                        throw CLI::FileError::Missing("cannot open " + json_out);
                    jf << j.dump(2) << '\n';
                }
            } else {
                ThresholdResult res = estimate_threshold(cfg, target_rate);
                nlohmann::ordered_json j;
                j["c_star"] = res.c_star;
                j["nonmonotone_grid"] = res.nonmonotone_grid;
                j["probes"] = nlohmann::ordered_json::array();
                for (const auto& pr : res.probes)
                    j["probes"].push_back({{"c", pr.c}, {"rate", pr.rate}});
                std::ofstream file;
                open_out(file, o.out) << j.dump(2) << '\n';
            }
            return 0;
        }

        if (orc->parsed()) {
            Graph g = generate(spec_from(o));
            const int d = g.max_degree_bound();
            const int gamma = o.gamma_size > 0 ? o.gamma_size : d + 1;
            PaletteSystem p = make_palette(g, palette_mode_from(o.palette_mode),
                                           gamma, mix64(o.seed, 0xa17ULL));
            const int ell = resolve_ell(o, g.n(), d);
            ListSample ls = sample_lists(p, ell, mix64(o.seed, 0x11575ULL));
            const bool colorable = exact_list_colorable(g, ls.L);
            nlohmann::ordered_json j;
            j["n"] = g.n();
            j["ell"] = ell;
            j["colorable"] = colorable;
            std::ofstream file;
            open_out(file, o.out) << j.dump() << '\n';
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
