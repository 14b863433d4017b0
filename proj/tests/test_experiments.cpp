#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rrd/experiments.hpp"
#include "rrd/rank.hpp"

using namespace rrd;

namespace {

ExperimentConfig psing_cfg(uint64_t seed = 91) {
    ExperimentConfig cfg;
    cfg.experiment = "psing-sweep";
    cfg.grid = {{4, 2}, {5, 1}, {3, 3}};
    cfg.n_samples = 400;
    cfg.master_seed = seed;
    return cfg;
}

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("rrdlab_test_") + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("config json round trip and validation") {
    ExperimentConfig cfg = psing_cfg();
    cfg.params["ac_p"] = "1/4";
    ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
    CHECK(back.experiment == cfg.experiment);
    CHECK(back.grid.size() == 3);
    CHECK(back.grid[1].n == 5);
    CHECK(back.n_samples == 400);

    auto bad = cfg.to_json();
    bad["grid"] = nlohmann::json::array({{3, 5}});
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad), ConfigError);
    auto bad2 = cfg.to_json();
    bad2["experiment"] = "mystery";
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad2), ConfigError);
    auto bad3 = cfg.to_json();
    bad3["n_samples"] = 0;
    CHECK_THROWS_AS(ExperimentConfig::from_json(bad3), ConfigError);
}

TEST_CASE("psing sweep: degenerate lines and interval sanity") {
    ExperimentReport rep = run_psing_sweep(psing_cfg(), 2);
    REQUIRE(rep.csv_rows.size() == 3);
    // (4,2): all of M_{4,2} is singular; (5,1): permutations, none singular;
    // (3,3): all-ones, always singular.
    auto field = [&](size_t row, size_t col) {
        std::istringstream is(rep.csv_rows[row]);
        std::string f;
        for (size_t c = 0; c <= col; ++c) std::getline(is, f, ',');
        return f;
    };
    CHECK(field(0, 3) == "400");
    CHECK(field(1, 3) == "0");
    CHECK(field(2, 3) == "400");
    for (size_t rwi = 0; rwi < 3; ++rwi) {
        double p = std::stod(field(rwi, 4));
        double lo = std::stod(field(rwi, 5));
        double hi = std::stod(field(rwi, 6));
        CHECK(lo <= p);
        CHECK(p <= hi);
    }
}

TEST_CASE("report totals are invariant under worker count") {
    ExperimentReport r1 = run_psing_sweep(psing_cfg(), 1);
    ExperimentReport r2 = run_psing_sweep(psing_cfg(), 2);
    ExperimentReport r3 = run_psing_sweep(psing_cfg(), 7);
    CHECK(r1.csv_rows == r2.csv_rows);
    CHECK(r1.csv_rows == r3.csv_rows);
}

TEST_CASE("manifest write, replay, and tamper detection") {
    ExperimentConfig cfg = psing_cfg(17);
    cfg.n_samples = 200;
    auto dir = temp_dir("replay");
    cfg.output_dir = dir.string();
    ExperimentReport rep = run_psing_sweep(cfg, 2);
    rep.write(cfg.output_dir);
    auto manifest_path = (dir / "manifest.json").string();

    // clean replay with a different worker count
    ExperimentReport again = replay(manifest_path, 1);
    CHECK(again.csv_rows == rep.csv_rows);

    // altered seed: detected as divergence after execution
    {
        nlohmann::json m;
        std::ifstream in(manifest_path);
        in >> m;
        m["config"]["master_seed"] = 18;
        auto tampered = (dir / "manifest_seed.json").string();
        std::ofstream out(tampered);
        out << m.dump();
        out.close();
        CHECK_THROWS_AS(replay(tampered, 2), ReplayDivergence);
    }
    // altered n_samples: config mismatch before execution
    {
        nlohmann::json m;
        std::ifstream in(manifest_path);
        in >> m;
        m["config"]["n_samples"] = 300;
        auto tampered = (dir / "manifest_ns.json").string();
        std::ofstream out(tampered);
        out << m.dump();
        out.close();
        CHECK_THROWS_AS(replay(tampered, 2), ConfigError);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("psing monte carlo agrees with the exact enumeration fraction at (4,2) and (5,2)") {
    // exact singular fractions
    for (auto [n, d] : std::vector<std::pair<uint32_t, uint32_t>>{{4, 2}, {5, 2}}) {
        uint64_t singular = 0, total = 0;
        enumerate_all(n, d, [&](const Digraph& g) {
            singular += is_singular(g).singular ? 1 : 0;
            ++total;
            return true;
        });
        double exact = static_cast<double>(singular) / total;
        ExperimentConfig cfg;
        cfg.experiment = "psing-sweep";
        cfg.grid = {{n, d}};
        cfg.n_samples = 20000;
        cfg.master_seed = 23 + n;
        cfg.params["eac_budget"] = 0;
        ExperimentReport rep = run_psing_sweep(cfg, 2);
        std::istringstream is(rep.csv_rows[0]);
        std::string f;
        for (int c = 0; c <= 4; ++c) std::getline(is, f, ',');
        double p_hat = std::stod(f);
        double sigma = std::sqrt(std::max(exact * (1 - exact), 1e-12) / cfg.n_samples);
        INFO("n ", n, " exact ", exact, " p_hat ", p_hat);
        CHECK(std::abs(p_hat - exact) <= 3.0 * std::max(sigma, 1e-9));
    }
}

TEST_CASE("p_hat monotone sanity at n=100: d=2 exceeds d in {5,8} at 95% confidence") {
    ExperimentConfig cfg;
    cfg.experiment = "psing-sweep";
    cfg.grid = {{100, 2}, {100, 3}, {100, 5}, {100, 8}};
    cfg.n_samples = 300;
    cfg.master_seed = 31;
    cfg.params["eac_budget"] = 0;
    ExperimentReport rep = run_psing_sweep(cfg, 2);
    REQUIRE(rep.csv_rows.size() == 4);
    auto interval = [&](size_t row) {
        std::istringstream is(rep.csv_rows[row]);
        std::string f;
        std::vector<std::string> fs;
        while (std::getline(is, f, ',')) fs.push_back(f);
        return std::pair<double, double>{std::stod(fs[5]), std::stod(fs[6])};
    };
    auto d2 = interval(0);
    for (size_t row : {2ul, 3ul}) {
        auto dk = interval(row);
        INFO("d2 interval [", d2.first, ",", d2.second, "] vs row ", row, " [", dk.first, ",", dk.second, "]");
        CHECK(d2.first > dk.second); // non-overlapping 95% intervals
    }
}

TEST_CASE("infeasible sampler points are recorded and skipped") {
    ExperimentConfig cfg;
    cfg.experiment = "psing-sweep";
    cfg.grid = {{30, 10}, {6, 2}};
    cfg.n_samples = 50;
    cfg.master_seed = 2;
    cfg.sampler.method = ChainConfig::Method::configuration; // hopeless at d=10
    cfg.params["eac_budget"] = 0;
    ExperimentReport rep = run_psing_sweep(cfg, 2);
    REQUIRE(rep.csv_rows.size() == 1);
    CHECK(rep.csv_rows[0].rfind("6,2,", 0) == 0);
    CHECK(rep.result["points"][0].contains("skipped"));
}

TEST_CASE("property suite aggregates degenerate d = n points") {
    ExperimentConfig cfg;
    cfg.experiment = "property-suite";
    cfg.grid = {{5, 5}};
    cfg.n_samples = 5;
    cfg.master_seed = 3;
    ExperimentReport rep = run_property_suite(cfg, 2);
    CHECK(rep.csv_rows.size() == 5);
    for (const auto& row : rep.csv_rows) {
        std::istringstream is(row);
        std::string f;
        std::vector<std::string> fs;
        while (std::getline(is, f, ',')) fs.push_back(f);
        CHECK(fs[9] == "0");  // alpha = 0, loops everywhere
        CHECK(fs[11] == "0"); // no zero minor when d = n
    }
}

TEST_CASE("omega2 frequency at (100,10), eps=0.3 stays above 0.99") {
    ExperimentConfig cfg;
    cfg.experiment = "property-suite";
    cfg.grid = {{100, 10}};
    cfg.n_samples = 200;
    cfg.master_seed = 12;
    ExperimentReport rep = run_property_suite(cfg, 2);
    double freq = rep.result["points"][0]["freq_omega2"].get<double>();
    INFO("freq_omega2 ", freq);
    CHECK(freq >= 0.99);
}

TEST_CASE("anticonc rows carry the support bound") {
    ExperimentConfig cfg;
    cfg.experiment = "anticonc";
    cfg.grid = {{12, 3}};
    cfg.n_samples = 300;
    cfg.master_seed = 5;
    cfg.params["j_sizes"] = {1, 2};
    ExperimentReport rep = run_anticonc(cfg, 1);
    CHECK(rep.csv_rows.size() == 2);
    CHECK(rep.csv_header.find("collision_hat") != std::string::npos);
}

TEST_CASE("enumerate experiment emits exact counts") {
    ExperimentConfig cfg;
    cfg.experiment = "enumerate";
    cfg.grid = {{4, 2}, {5, 2}, {4, 4}};
    cfg.n_samples = 1;
    ExperimentReport rep = run_enumerate(cfg, 1);
    CHECK(rep.csv_rows == std::vector<std::string>{"4,2,90", "5,2,2040", "4,4,1"});
}

TEST_CASE("lo suite rows all pass their bounds") {
    ExperimentConfig cfg;
    cfg.experiment = "lo-suite";
    cfg.master_seed = 7;
    cfg.params["max_2d"] = 12;
    cfg.params["erdos_max_n"] = 12;
    cfg.params["perm_samples"] = 5000;
    ExperimentReport rep = run_lo_suite(cfg, 1);
    for (const auto& row : rep.csv_rows) {
        CHECK(row.substr(row.size() - 2) == ",1");
    }
}

TEST_CASE("shuffle suite rows parse and aggregate") {
    ExperimentConfig cfg;
    cfg.experiment = "shuffle-suite";
    cfg.grid = {{12, 3}};
    cfg.n_samples = 8;
    cfg.master_seed = 11;
    ExperimentReport rep = run_shuffle_suite(cfg, 2);
    CHECK(rep.csv_rows.size() == 8);
    CHECK(rep.result["points"][0].contains("witness_rate"));
}

TEST_CASE("deterministic double formatting") {
    CHECK(fmt_double(0.5) == "0.5");
    CHECK(fmt_double(1.0 / 3.0) == "0.3333333333");
}
