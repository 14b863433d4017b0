// rrdlab: sampling, exact rank and property experiments on d-regular
// digraphs / 0-1 matrices with constant margins.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrd/digraph.hpp"
#include "rrd/experiments.hpp"
#include "rrd/lo.hpp"
#include "rrd/properties.hpp"
#include "rrd/rank.hpp"
#include "rrd/sampler.hpp"

namespace {

using namespace rrd;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitDivergence = 4;

std::vector<GridPoint> parse_grid(const std::string& spec) {
    std::vector<GridPoint> grid;
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        auto x = tok.find('x');
        if (x == std::string::npos) throw ConfigError("bad grid token (want NxD): " + tok);
        GridPoint p;
        p.n = static_cast<uint32_t>(std::stoul(tok.substr(0, x)));
        p.d = static_cast<uint32_t>(std::stoul(tok.substr(x + 1)));
        grid.push_back(p);
    }
    if (grid.empty()) throw ConfigError("empty grid spec");
    return grid;
}

struct CommonOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<uint32_t> workers;
    std::string out_dir;
    std::string grid_spec;
    std::optional<uint64_t> samples;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "experiment config JSON file");
    cmd->add_option("--seed", o.seed, "master seed override");
    cmd->add_option("--workers", o.workers, "worker count (default: RRDLAB_WORKERS or hardware)");
    cmd->add_option("--out", o.out_dir, "output directory override");
    cmd->add_option("--grid", o.grid_spec, "inline grid, e.g. 4x2,100x10");
    cmd->add_option("--samples", o.samples, "samples per grid point override");
}

int run_experiment_cmd(const std::string& experiment, const CommonOpts& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot open config: " + o.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad config JSON: ") + e.what());
        }
        if (!j.contains("experiment")) j["experiment"] = experiment;
        cfg = ExperimentConfig::from_json(j);
        if (cfg.experiment != experiment)
            throw ConfigError("config experiment '" + cfg.experiment + "' does not match subcommand");
    } else {
        cfg.experiment = experiment;
    }
    if (!o.grid_spec.empty()) cfg.grid = parse_grid(o.grid_spec);
    if (o.samples) cfg.n_samples = *o.samples;
    if (o.seed) cfg.master_seed = *o.seed;
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    cfg.validate();
    uint32_t workers = o.workers ? *o.workers : default_workers();
    ExperimentReport rep = run_experiment(cfg, workers);
    if (!cfg.output_dir.empty()) {
        rep.write(cfg.output_dir);
        std::cout << "wrote rows.csv, report.json, manifest.json to " << cfg.output_dir << "\n";
    } else {
        std::cout << rep.csv_header << "\n";
        for (const auto& row : rep.csv_rows) std::cout << row << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"experiments on uniform random d-regular digraphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("rrdlab ") + kToolVersion);

    // sample
    auto* sample = app.add_subcommand("sample", "draw graphs and print them in the text format");
    uint32_t s_n = 8, s_d = 3;
    uint64_t s_count = 1, s_seed = 1;
    std::string s_method = "auto", s_out;
    sample->add_option("--n", s_n, "vertex count")->required();
    sample->add_option("--d", s_d, "degree")->required();
    sample->add_option("--count", s_count, "number of graphs");
    sample->add_option("--seed", s_seed, "seed");
    sample->add_option("--method", s_method, "auto | configuration | switch");
    sample->add_option("--out", s_out, "output directory (default: stdout)");

    // rank
    auto* rank = app.add_subcommand("rank", "exact singularity certificate for a graph file");
    std::string r_in = "-";
    rank->add_option("--in", r_in, "graph file (- for stdin)");

    // experiments
    CommonOpts psing_o, prop_o, anti_o, lo_o, shuf_o;
    auto* psing = app.add_subcommand("psing", "singularity-probability sweep");
    add_common(psing, psing_o);
    auto* props = app.add_subcommand("properties", "per-graph structural event suite");
    add_common(props, prop_o);
    auto* anti = app.add_subcommand("anticonc", "delta^J anti-concentration estimates");
    add_common(anti, anti_o);
    auto* lo = app.add_subcommand("lo", "exact Littlewood-Offord suites");
    add_common(lo, lo_o);
    auto* shuf = app.add_subcommand("shuffle", "one-row shuffle class experiments");
    add_common(shuf, shuf_o);

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "exhaustive enumeration / exact counts");
    uint32_t e_n = 4, e_d = 2, e_cap = 6;
    bool e_count_only = false;
    std::string e_out;
    enumerate->add_option("--n", e_n)->required();
    enumerate->add_option("--d", e_d)->required();
    enumerate->add_option("--cap", e_cap, "enumeration size cap");
    enumerate->add_flag("--count-only", e_count_only, "print the count without materializing");
    enumerate->add_option("--out", e_out, "write graph files to this directory");

    // replay
    auto* replay_cmd = app.add_subcommand("replay", "re-run a manifest and verify byte-identical rows");
    std::string rp_manifest;
    std::optional<uint32_t> rp_workers;
    replay_cmd->add_option("--manifest", rp_manifest, "manifest.json from a prior run")->required();
    replay_cmd->add_option("--workers", rp_workers, "worker count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sample->parsed()) {
            ChainConfig cc;
            cc.method = ChainConfig::method_parse(s_method);
            cc.seed = s_seed;
            Rng rng(s_seed);
            for (uint64_t i = 0; i < s_count; ++i) {
                Rng r = rng.derive(i);
                Digraph g = sample_auto(s_n, s_d, cc, r);
                if (s_out.empty()) {
                    std::cout << g.serialize();
                } else {
                    std::filesystem::create_directories(s_out);
                    char name[32];
                    std::snprintf(name, sizeof name, "graph_%06llu.txt",
                                  static_cast<unsigned long long>(i));
                    std::ofstream f(std::filesystem::path(s_out) / name, std::ios::binary);
                    f << g.serialize();
                }
            }
            return kExitOk;
        }
        if (rank->parsed()) {
            Digraph g = [&] {
                if (r_in == "-") return Digraph::parse_stream(std::cin);
                std::ifstream f(r_in);
                if (!f) throw ConfigError("cannot open graph file: " + r_in);
                return Digraph::parse_stream(f);
            }();
            RankCertificate cert = is_singular(g);
            std::cout << cert.to_json() << "\n";
            return kExitOk;
        }
        if (psing->parsed()) return run_experiment_cmd("psing-sweep", psing_o);
        if (props->parsed()) return run_experiment_cmd("property-suite", prop_o);
        if (anti->parsed()) return run_experiment_cmd("anticonc", anti_o);
        if (lo->parsed()) return run_experiment_cmd("lo-suite", lo_o);
        if (shuf->parsed()) return run_experiment_cmd("shuffle-suite", shuf_o);
        if (enumerate->parsed()) {
            if (e_count_only) {
                std::cout << count_all(e_n, e_d).get_str() << "\n";
                return kExitOk;
            }
            uint64_t idx = 0;
            enumerate_all(e_n, e_d, [&](const Digraph& g) {
                if (e_out.empty()) {
                    std::cout << g.serialize() << "\n";
                } else {
                    std::filesystem::create_directories(e_out);
                    char name[32];
                    std::snprintf(name, sizeof name, "graph_%06llu.txt",
                                  static_cast<unsigned long long>(idx));
                    std::ofstream f(std::filesystem::path(e_out) / name, std::ios::binary);
                    f << g.serialize();
                }
                ++idx;
                return true;
            }, e_cap);
            std::cerr << idx << " graphs\n";
            return kExitOk;
        }
        if (replay_cmd->parsed()) {
            uint32_t workers = rp_workers ? *rp_workers : default_workers();
            ExperimentReport rep = replay(rp_manifest, workers);
            std::cout << "replay ok: " << rep.csv_rows.size() << " rows identical\n";
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ReplayDivergence& e) {
        std::cerr << "replay divergence: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
