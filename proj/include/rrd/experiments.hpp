#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrd/sampler.hpp"

namespace rrd {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReplayDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridPoint {
    uint32_t n = 0, d = 0;
};

struct ExperimentConfig {
    std::string experiment; // psing-sweep | property-suite | anticonc | lo-suite | shuffle-suite | enumerate
    std::vector<GridPoint> grid;
    uint64_t n_samples = 1000;
    uint64_t master_seed = 1;
    ChainConfig sampler;
    nlohmann::json params = nlohmann::json::object();
    std::string output_dir;

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const; // throws ConfigError
};

/**
 * Seeded, replayable record of a run. csv_rows are the canonical result
 * rows: they exclude timestamps and worker counts, and a replay must
 * reproduce them byte for byte.
 */
struct ExperimentReport {
    ExperimentConfig config;
    std::string csv_header;
    std::vector<std::string> csv_rows;
    nlohmann::json result = nlohmann::json::object();
    std::string started_at, finished_at;
    uint64_t runtime_ms = 0;
    uint32_t workers = 1;

    nlohmann::json manifest() const;
    // Common envelope: {op, params, seed, n_samples, result, runtime_ms}.
    nlohmann::json envelope() const;
    // Writes rows.csv, report.json (the envelope) and manifest.json.
    void write(const std::string& dir) const;
};

uint32_t default_workers(); // RRDLAB_WORKERS env var, else hardware concurrency

ExperimentReport run_experiment(const ExperimentConfig& cfg, uint32_t workers);

ExperimentReport run_psing_sweep(const ExperimentConfig& cfg, uint32_t workers);
ExperimentReport run_property_suite(const ExperimentConfig& cfg, uint32_t workers);
ExperimentReport run_anticonc(const ExperimentConfig& cfg, uint32_t workers);
ExperimentReport run_lo_suite(const ExperimentConfig& cfg, uint32_t workers);
ExperimentReport run_shuffle_suite(const ExperimentConfig& cfg, uint32_t workers);
ExperimentReport run_enumerate(const ExperimentConfig& cfg, uint32_t workers);

// Re-executes the manifest's config and verifies byte-identical rows.
// Throws ConfigError on internal inconsistency (before execution) and
// ReplayDivergence on row mismatch.
ExperimentReport replay(const std::string& manifest_path, uint32_t workers);

// Deterministic float formatting shared by all report writers.
std::string fmt_double(double v);

} // namespace rrd
