#include "rrd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "rrd/lo.hpp"
#include "rrd/properties.hpp"
#include "rrd/rank.hpp"
#include "rrd/stats.hpp"

namespace rrd {

namespace {

uint64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return static_cast<uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count());
}

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Deterministic contiguous-chunk fan-out; the per-index results land in a
// pre-sized vector, so totals are independent of the worker count.
template <typename T, typename Fn>
std::vector<T> parallel_map(uint64_t count, uint32_t workers, Fn&& fn) {
    std::vector<T> out(count);
    if (count == 0) return out;
    workers = std::max<uint32_t>(1, std::min<uint64_t>(workers, count));
    if (workers == 1) {
        for (uint64_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    uint64_t chunk = (count + workers - 1) / workers;
    for (uint32_t w = 0; w < workers; ++w) {
        uint64_t lo = w * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, w] {
            try {
                for (uint64_t i = lo; i < hi; ++i) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

double ref_bound_shape(uint32_t d) {
    if (d <= 1) return 0.0;
    double l = std::log(static_cast<double>(d));
    return l * l * l / std::sqrt(static_cast<double>(d));
}

Rat param_rat(const nlohmann::json& params, const char* key, const char* fallback) {
    if (params.contains(key)) {
        const auto& v = params.at(key);
        if (v.is_string()) return rat_parse(v.get<std::string>());
        if (v.is_number_integer()) return Rat(static_cast<long>(v.get<int64_t>()));
        throw ConfigError(std::string("param ") + key + " must be a fraction string or integer");
    }
    return rat_parse(fallback);
}

uint64_t param_u64(const nlohmann::json& params, const char* key, uint64_t fallback) {
    if (params.contains(key)) return params.at(key).get<uint64_t>();
    return fallback;
}

FrozenColumnSet frozen_from_json(const nlohmann::json& j) {
    FrozenColumnSet f;
    f.cols = j.at("cols").get<std::vector<uint32_t>>();
    f.supports = j.at("supports").get<std::vector<std::vector<uint32_t>>>();
    return f;
}

} // namespace

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        cfg.experiment = j.at("experiment").get<std::string>();
        if (j.contains("grid"))
            for (const auto& p : j.at("grid"))
                cfg.grid.push_back({p.at(0).get<uint32_t>(), p.at(1).get<uint32_t>()});
        cfg.n_samples = j.value("n_samples", cfg.n_samples);
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        if (j.contains("sampler")) {
            const auto& s = j.at("sampler");
            cfg.sampler.burn_in_steps = s.value("burn_in_steps", cfg.sampler.burn_in_steps);
            cfg.sampler.thinning = s.value("thinning", cfg.sampler.thinning);
            cfg.sampler.seed = s.value("seed", cfg.sampler.seed);
            cfg.sampler.method = ChainConfig::method_parse(s.value("method", std::string("auto")));
        }
        if (j.contains("params")) cfg.params = j.at("params");
        cfg.output_dir = j.value("output_dir", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    auto jgrid = nlohmann::json::array();
    for (const auto& p : grid) jgrid.push_back({p.n, p.d});
    j["grid"] = jgrid;
    j["n_samples"] = n_samples;
    j["master_seed"] = master_seed;
    j["sampler"] = {{"burn_in_steps", sampler.burn_in_steps},
                    {"thinning", sampler.thinning},
                    {"seed", sampler.seed},
                    {"method", ChainConfig::method_name(sampler.method)}};
    j["params"] = params;
    j["output_dir"] = output_dir;
    return j;
}

void ExperimentConfig::validate() const {
    static const char* known[] = {"psing-sweep", "property-suite", "anticonc",
                                  "lo-suite",    "shuffle-suite",  "enumerate"};
    bool ok = false;
    for (const char* k : known) ok = ok || experiment == k;
    if (!ok) throw ConfigError("unknown experiment: " + experiment);
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    for (const auto& p : grid)
        if (p.d < 1 || p.d > p.n)
            throw ConfigError("grid point needs 1 <= d <= n, got n=" + std::to_string(p.n) +
                              " d=" + std::to_string(p.d));
    if (grid.empty() && experiment != "lo-suite")
        throw ConfigError("experiment " + experiment + " needs a non-empty grid");
}

nlohmann::json ExperimentReport::manifest() const {
    nlohmann::json m;
    m["tool"] = "rrdlab";
    m["version"] = kToolVersion;
    m["config"] = config.to_json();
    m["csv_header"] = csv_header;
    m["rows"] = csv_rows;
    m["started_at"] = started_at;
    m["finished_at"] = finished_at;
    m["workers"] = workers;
    return m;
}

nlohmann::json ExperimentReport::envelope() const {
    nlohmann::json rep;
    rep["op"] = config.experiment;
    rep["params"] = config.to_json();
    rep["seed"] = config.master_seed;
    rep["n_samples"] = config.n_samples;
    rep["result"] = result;
    rep["runtime_ms"] = runtime_ms;
    rep["started_at"] = started_at;
    rep["finished_at"] = finished_at;
    rep["workers"] = workers;
    return rep;
}

void ExperimentReport::write(const std::string& dir) const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    auto dump = [&](const std::string& name, const std::string& body) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
        out << body;
    };
    std::ostringstream csv;
    csv << csv_header << '\n';
    for (const auto& r : csv_rows) csv << r << '\n';
    dump("rows.csv", csv.str());
    dump("report.json", envelope().dump(2) + "\n");
    dump("manifest.json", manifest().dump(2) + "\n");
}

uint32_t default_workers() {
    if (const char* env = std::getenv("RRDLAB_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<uint32_t>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// ---------------------------------------------------------------------------
// psing-sweep

ExperimentReport run_psing_sweep(const ExperimentConfig& cfg, uint32_t workers) {
    ExperimentReport rep;
    rep.config = cfg;
    rep.workers = workers;
    rep.started_at = now_iso8601();
    auto t0 = std::chrono::steady_clock::now();
    rep.csv_header = "n,d,samples,singular_count,p_hat,wilson_lo,wilson_hi,ref_bound_shape,"
                     "eac_evaluated,eac_certified_false,eac_heuristic_true";
    Rat ac_p = param_rat(cfg.params, "ac_p", "1/4");
    uint64_t eac_budget = param_u64(cfg.params, "eac_budget", 200);
    auto points = nlohmann::json::array();
    for (size_t pi = 0; pi < cfg.grid.size(); ++pi) {
        const auto [n, d] = cfg.grid[pi];
        Rng point_rng = Rng(cfg.master_seed).derive(pi);
        uint64_t point_seed = point_rng.next();
        auto sample_graph = [&](uint64_t idx) {
            Rng r = Rng(point_seed).derive(idx);
            return sample_auto(n, d, cfg.sampler, r);
        };
        std::vector<uint8_t> flags;
        try {
            flags = parallel_map<uint8_t>(cfg.n_samples, workers, [&](uint64_t idx) -> uint8_t {
                return is_singular(sample_graph(idx)).singular ? 1 : 0;
            });
        } catch (const InfeasibleError& e) {
            nlohmann::json pt;
            pt["n"] = n;
            pt["d"] = d;
            pt["skipped"] = e.what();
            points.push_back(pt);
            continue;
        }
        uint64_t singular = 0;
        for (uint8_t f : flags) singular += f;
        // Almost-constant diagnostics on the first few singular instances
        // (sample order, so the tally is worker-invariant).
        uint64_t eac_eval = 0, eac_false = 0, eac_heur = 0;
        for (uint64_t idx = 0; idx < cfg.n_samples && eac_eval < eac_budget; ++idx) {
            if (!flags[idx]) continue;
            EacReport er = eac_event(sample_graph(idx), ac_p);
            ++eac_eval;
            if (er.verdict == EacVerdict::certified_false) ++eac_false;
            if (er.verdict == EacVerdict::heuristic_true) ++eac_heur;
        }
        double p_hat = static_cast<double>(singular) / static_cast<double>(cfg.n_samples);
        Interval iv = wilson_interval(singular, cfg.n_samples);
        std::ostringstream row;
        row << n << ',' << d << ',' << cfg.n_samples << ',' << singular << ',' << fmt_double(p_hat)
            << ',' << fmt_double(iv.lo) << ',' << fmt_double(iv.hi) << ','
            << fmt_double(ref_bound_shape(d)) << ',' << eac_eval << ',' << eac_false << ','
            << eac_heur;
        rep.csv_rows.push_back(row.str());
        nlohmann::json pt;
        pt["n"] = n;
        pt["d"] = d;
        pt["samples"] = cfg.n_samples;
        pt["singular_count"] = singular;
        pt["p_hat"] = p_hat;
        pt["wilson_95"] = {iv.lo, iv.hi};
        pt["ref_bound_shape"] = ref_bound_shape(d);
        pt["ref_bound_note"] = "ln^3(d)/sqrt(d), constant 1, shape only";
        pt["eac"] = {{"evaluated", eac_eval},
                     {"certified_false", eac_false},
                     {"heuristic_true", eac_heur},
                     {"p", rat_str(ac_p)}};
        points.push_back(pt);
    }
    rep.result["points"] = points;
    rep.runtime_ms = elapsed_ms(t0);
    rep.finished_at = now_iso8601();
    return rep;
}

// ---------------------------------------------------------------------------
// property-suite

ExperimentReport run_property_suite(const ExperimentConfig& cfg, uint32_t workers) {
    ExperimentReport rep;
    rep.config = cfg;
    rep.workers = workers;
    rep.started_at = now_iso8601();
    auto t0 = std::chrono::steady_clock::now();
    rep.csv_header = "n,d,sample,in_omega2,min_pair_union,in_omega_eps,min_sj_ratio,"
                     "expansion_worst_ratio,gamma_member,alpha,alpha_exact,zero_minor_found,"
                     "zero_minor_exact,eac_verdict";
    Rat eps = param_rat(cfg.params, "eps", "3/10");
    Rat c0 = param_rat(cfg.params, "c0", "1/10");
    Rat ac_p = param_rat(cfg.params, "ac_p", "1/4");
    uint64_t budget = param_u64(cfg.params, "subset_budget", 1000000);
    auto agg = nlohmann::json::array();
    for (size_t pi = 0; pi < cfg.grid.size(); ++pi) {
        const auto [n, d] = cfg.grid[pi];
        uint64_t point_seed = Rng(cfg.master_seed).derive(pi).next();
        uint32_t zm_l = static_cast<uint32_t>(param_u64(cfg.params, "zero_minor_l", std::max<uint64_t>(1, n / 8)));
        uint32_t zm_r = static_cast<uint32_t>(param_u64(cfg.params, "zero_minor_r", std::max<uint64_t>(1, n / 8)));
        auto rows = parallel_map<std::string>(cfg.n_samples, workers, [&](uint64_t idx) {
            Rng r = Rng(point_seed).derive(idx);
            Digraph g = sample_auto(n, d, cfg.sampler, r);
            Rng engine_rng = r.derive(1);
            OmegaReport om = omega_events(g, eps, budget, engine_rng, c0);
            Rng exp_rng = r.derive(2);
            uint32_t k_max = std::max<uint32_t>(2, om.k_max);
            k_max = std::min<uint32_t>(k_max, n);
            ExpansionReport ex = expansion_check(g, eps, k_max, budget, exp_rng);
            IndependenceResult ind = independence_number(g);
            Rng zm_rng = r.derive(3);
            ZeroMinorResult zm =
                zero_minor_search(g, zm_l, zm_r, SearchMode::heuristic, zm_rng);
            EacReport eac = eac_event(g, ac_p);
            std::ostringstream row;
            row << n << ',' << d << ',' << idx << ',' << (om.in_omega2 ? 1 : 0) << ','
                << om.min_pair_union << ',' << (om.in_omega_eps ? 1 : 0) << ','
                << rat_str(om.min_sj_ratio) << ',' << rat_str(ex.worst_ratio) << ','
                << (ex.gamma_member ? 1 : 0) << ',' << ind.size << ',' << (ind.exact ? 1 : 0) << ','
                << (zm.found ? 1 : 0) << ',' << (zm.exact ? 1 : 0) << ','
                << eac_verdict_name(eac.verdict);
            return row.str();
        });
        uint64_t omega2 = 0, omega_eps = 0, gamma = 0, zm_found = 0;
        for (const auto& row : rows) {
            std::istringstream is(row);
            std::string f;
            std::vector<std::string> fs;
            while (std::getline(is, f, ',')) fs.push_back(f);
            omega2 += fs[3] == "1";
            omega_eps += fs[5] == "1";
            gamma += fs[8] == "1";
            zm_found += fs[11] == "1";
            rep.csv_rows.push_back(row);
        }
        nlohmann::json pt;
        pt["n"] = n;
        pt["d"] = d;
        pt["samples"] = cfg.n_samples;
        pt["freq_omega2"] = static_cast<double>(omega2) / cfg.n_samples;
        pt["freq_omega_eps"] = static_cast<double>(omega_eps) / cfg.n_samples;
        pt["freq_gamma"] = static_cast<double>(gamma) / cfg.n_samples;
        pt["freq_zero_minor_found"] = static_cast<double>(zm_found) / cfg.n_samples;
        agg.push_back(pt);
    }
    rep.result["points"] = agg;
    rep.result["eps"] = rat_str(eps);
    rep.runtime_ms = elapsed_ms(t0);
    rep.finished_at = now_iso8601();
    return rep;
}

// ---------------------------------------------------------------------------
// anticonc

ExperimentReport run_anticonc(const ExperimentConfig& cfg, uint32_t workers) {
    (void)workers; // sampling is driven through the estimator's own fan-out
    ExperimentReport rep;
    rep.config = cfg;
    rep.workers = workers;
    rep.started_at = now_iso8601();
    auto t0 = std::chrono::steady_clock::now();
    rep.csv_header = "n,d,j_size,samples,mode,thinning,distinct,max_atom_hat,collision_hat,sigma,"
                     "support_bound";
    std::vector<uint32_t> j_sizes{1, 2, 4, 8};
    if (cfg.params.contains("j_sizes")) j_sizes = cfg.params.at("j_sizes").get<std::vector<uint32_t>>();
    SampleMode mode = SampleMode::independent;
    if (cfg.params.value("mode", std::string("independent")) == "stream") mode = SampleMode::stream;
    uint64_t thinning = param_u64(cfg.params, "thinning", 0);
    const FrozenColumnSet frozen = cfg.params.contains("frozen")
                                       ? frozen_from_json(cfg.params.at("frozen"))
                                       : FrozenColumnSet{};
    auto points = nlohmann::json::array();
    for (size_t pi = 0; pi < cfg.grid.size(); ++pi) {
        const auto [n, d] = cfg.grid[pi];
        for (uint32_t js : j_sizes) {
            if (js > n) continue;
            std::vector<uint32_t> j_set(js);
            // Deterministic choice: the last js columns, clear of the frozen
            // block which freezes low-index columns in harness configs.
            for (uint32_t t = 0; t < js; ++t) j_set[t] = n - js + t;
            Rng rng = Rng(cfg.master_seed).derive(pi * 1000 + js);
            AnticoncEstimate est = delta_anticoncentration(
                n, d, j_set, cfg.n_samples, frozen.empty() ? nullptr : &frozen, cfg.sampler, rng,
                mode, thinning);
            uint32_t m_min = std::max(d, js);
            double support_bound = m_min <= n ? 1.0 / binomial(n, m_min).get_d() : 0.0;
            std::ostringstream row;
            row << n << ',' << d << ',' << js << ',' << cfg.n_samples << ','
                << (mode == SampleMode::stream ? "stream" : "independent") << ',' << est.thinning
                << ',' << est.distinct << ',' << fmt_double(est.max_atom_hat) << ','
                << fmt_double(est.collision_hat) << ',' << fmt_double(est.sigma) << ','
                << fmt_double(support_bound);
            rep.csv_rows.push_back(row.str());
            nlohmann::json pt;
            pt["n"] = n;
            pt["d"] = d;
            pt["j_size"] = js;
            pt["samples"] = cfg.n_samples;
            pt["collision_hat"] = est.collision_hat;
            pt["sigma"] = est.sigma;
            pt["max_atom_hat"] = est.max_atom_hat;
            pt["distinct"] = est.distinct;
            pt["support_bound"] = support_bound;
            pt["regime_flag_I"] = est.regime_flag_I;
            pt["regime_flag_J"] = est.regime_flag_J;
            pt["conditional_heuristic"] = est.conditional_heuristic;
            points.push_back(pt);
        }
    }
    rep.result["points"] = points;
    rep.runtime_ms = elapsed_ms(t0);
    rep.finished_at = now_iso8601();
    return rep;
}

// ---------------------------------------------------------------------------
// lo-suite

ExperimentReport run_lo_suite(const ExperimentConfig& cfg, uint32_t workers) {
    (void)workers;
    ExperimentReport rep;
    rep.config = cfg;
    rep.workers = workers;
    rep.started_at = now_iso8601();
    auto t0 = std::chrono::steady_clock::now();
    rep.csv_header = "op,k,d,value,bound,ok";
    uint64_t max_2d = param_u64(cfg.params, "max_2d", 20);
    uint64_t erdos_max_n = param_u64(cfg.params, "erdos_max_n", 20);
    uint64_t perm_samples = param_u64(cfg.params, "perm_samples", 100000);
    // Canonical subset-sum atoms: v = k ones padded with zeros.
    for (uint32_t twod = 2; twod <= max_2d; twod += 2) {
        uint32_t d = twod / 2;
        for (uint32_t k = 1; k <= d; ++k) {
            std::vector<Rat> v(twod, Rat(0));
            for (uint32_t t = 0; t < k; ++t) v[t] = 1;
            Rat atom = max_atom(v);
            // atom <= 10/sqrt(k), exactly: atom^2 * k <= 100
            bool ok = atom * atom * Rat(static_cast<unsigned long>(k)) <= Rat(100);
            std::ostringstream row;
            row << "max_atom," << k << ',' << d << ',' << rat_str(atom) << ','
                << fmt_double(10.0 / std::sqrt(static_cast<double>(k))) << ',' << (ok ? 1 : 0);
            rep.csv_rows.push_back(row.str());
        }
    }
    for (uint32_t n = 1; n <= erdos_max_n; ++n) {
        std::vector<Rat> x(n, Rat(1));
        Rat atom = erdos_lo_max_atom(x);
        bool ok = atom * atom * Rat(static_cast<unsigned long>(n)) <= Rat(1);
        std::ostringstream row;
        row << "erdos_max_atom," << n << ",0," << rat_str(atom) << ','
            << fmt_double(1.0 / std::sqrt(static_cast<double>(n))) << ',' << (ok ? 1 : 0);
        rep.csv_rows.push_back(row.str());
    }
    {
        Rng rng = Rng(cfg.master_seed).derive(0x10);
        PermPairEstimate pe = permutation_pair_estimate(10, 10, perm_samples, rng);
        std::ostringstream row;
        row << "perm_pair," << pe.k << ',' << pe.d << ',' << fmt_double(pe.frequency) << ','
            << fmt_double(pe.reference_bound) << ','
            << (pe.frequency <= pe.reference_bound ? 1 : 0);
        rep.csv_rows.push_back(row.str());
    }
    rep.result["rows"] = rep.csv_rows.size();
    rep.runtime_ms = elapsed_ms(t0);
    rep.finished_at = now_iso8601();
    return rep;
}

// ---------------------------------------------------------------------------
// shuffle-suite

ExperimentReport run_shuffle_suite(const ExperimentConfig& cfg, uint32_t workers) {
    ExperimentReport rep;
    rep.config = cfg;
    rep.workers = workers;
    rep.started_at = now_iso8601();
    auto t0 = std::chrono::steady_clock::now();
    rep.csv_header = "n,d,sample,outcome,q,eps,m2,class_size,zero_fraction,bound,bound_holds";
    auto points = nlohmann::json::array();
    for (size_t pi = 0; pi < cfg.grid.size(); ++pi) {
        const auto [n, d] = cfg.grid[pi];
        uint64_t point_seed = Rng(cfg.master_seed).derive(pi).next();
        struct Row {
            std::string csv;
            nlohmann::json detail;
        };
        auto rows = parallel_map<Row>(cfg.n_samples, workers, [&](uint64_t idx) {
            Rng r = Rng(point_seed).derive(idx);
            Digraph g = sample_auto(n, d, cfg.sampler, r);
            Rng er = r.derive(1);
            ShuffleClassReport sc = shuffle_class_auto(g, er);
            std::ostringstream row;
            row << n << ',' << d << ',' << idx << ',' << shuffle_outcome_name(sc.outcome) << ','
                << sc.q << ',' << rat_str(sc.epsilon) << ',' << sc.m2 << ','
                << sc.class_size.get_str() << ',' << rat_str(sc.zero_fraction) << ','
                << (sc.bound ? fmt_double(*sc.bound) : std::string("na")) << ','
                << (sc.bound_holds ? (*sc.bound_holds ? "1" : "0") : "na");
            nlohmann::json detail;
            detail["sample"] = idx;
            detail["outcome"] = shuffle_outcome_name(sc.outcome);
            detail["q"] = sc.q;
            detail["q_witnessed"] = sc.q_witnessed;
            detail["eps"] = rat_str(sc.epsilon);
            detail["m2"] = sc.m2;
            detail["in_omega2"] = sc.in_omega2;
            detail["pair_overlap_ok"] = sc.pair_overlap_ok;
            detail["class_size"] = sc.class_size.get_str();
            detail["zero_fraction"] = rat_str(sc.zero_fraction);
            // the chosen test vector, exact integers, for re-verification
            auto vj = nlohmann::json::array();
            for (const Int& x : sc.v) vj.push_back(x.get_str());
            detail["v"] = vj;
            return Row{row.str(), std::move(detail)};
        });
        uint64_t witnessed = 0, bound_ok = 0, bound_checked = 0;
        auto samples = nlohmann::json::array();
        for (const auto& row : rows) {
            rep.csv_rows.push_back(row.csv);
            samples.push_back(row.detail);
            std::istringstream is(row.csv);
            std::string f;
            std::vector<std::string> fs;
            while (std::getline(is, f, ',')) fs.push_back(f);
            if (fs[3] == "ok") ++witnessed;
            if (fs[10] != "na") {
                ++bound_checked;
                bound_ok += fs[10] == "1";
            }
        }
        nlohmann::json pt;
        pt["n"] = n;
        pt["d"] = d;
        pt["samples"] = cfg.n_samples;
        pt["witness_rate"] = static_cast<double>(witnessed) / cfg.n_samples;
        pt["bound_checked"] = bound_checked;
        pt["bound_ok"] = bound_ok;
        pt["runs"] = samples;
        points.push_back(pt);
    }
    rep.result["points"] = points;
    rep.runtime_ms = elapsed_ms(t0);
    rep.finished_at = now_iso8601();
    return rep;
}

// ---------------------------------------------------------------------------
// enumerate

ExperimentReport run_enumerate(const ExperimentConfig& cfg, uint32_t workers) {
    ExperimentReport rep;
    rep.config = cfg;
    rep.workers = workers;
    rep.started_at = now_iso8601();
    auto t0 = std::chrono::steady_clock::now();
    rep.csv_header = "n,d,count";
    bool count_only = cfg.params.value("count_only", true);
    uint32_t cap = static_cast<uint32_t>(param_u64(cfg.params, "cap", 6));
    auto points = nlohmann::json::array();
    for (const auto& [n, d] : cfg.grid) {
        Int count = count_all(n, d);
        std::ostringstream row;
        row << n << ',' << d << ',' << count.get_str();
        rep.csv_rows.push_back(row.str());
        nlohmann::json pt;
        pt["n"] = n;
        pt["d"] = d;
        pt["count"] = count.get_str();
        if (!count_only && !cfg.output_dir.empty()) {
            namespace fs = std::filesystem;
            fs::path dir = fs::path(cfg.output_dir) / ("graphs_" + std::to_string(n) + "_" + std::to_string(d));
            fs::create_directories(dir);
            uint64_t idx = 0;
            enumerate_all(n, d, [&](const Digraph& g) {
                char name[32];
                std::snprintf(name, sizeof name, "graph_%06llu.txt", static_cast<unsigned long long>(idx++));
                std::ofstream out(dir / name, std::ios::binary);
                out << g.serialize();
                return true;
            }, cap);
            pt["written"] = idx;
        }
        points.push_back(pt);
    }
    rep.result["points"] = points;
    rep.runtime_ms = elapsed_ms(t0);
    rep.finished_at = now_iso8601();
    return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, uint32_t workers) {
    cfg.validate();
    if (cfg.experiment == "psing-sweep") return run_psing_sweep(cfg, workers);
    if (cfg.experiment == "property-suite") return run_property_suite(cfg, workers);
    if (cfg.experiment == "anticonc") return run_anticonc(cfg, workers);
    if (cfg.experiment == "lo-suite") return run_lo_suite(cfg, workers);
    if (cfg.experiment == "shuffle-suite") return run_shuffle_suite(cfg, workers);
    if (cfg.experiment == "enumerate") return run_enumerate(cfg, workers);
    throw ConfigError("unknown experiment: " + cfg.experiment);
}

ExperimentReport replay(const std::string& manifest_path, uint32_t workers) {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest: " + manifest_path);
    nlohmann::json m;
    try {
        in >> m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad manifest JSON: ") + e.what());
    }
    if (!m.contains("config") || !m.contains("rows"))
        throw ConfigError("manifest lacks config or rows");
    if (m.value("version", std::string()) != kToolVersion)
        std::fprintf(stderr, "replay: manifest version %s, tool version %s\n",
                     m.value("version", std::string("?")).c_str(), kToolVersion);
    ExperimentConfig cfg = ExperimentConfig::from_json(m.at("config"));
    std::vector<std::string> rows = m.at("rows").get<std::vector<std::string>>();
    // Static consistency: a samples column must match n_samples before any
    // execution happens.
    int samples_col = -1;
    if (cfg.experiment == "psing-sweep") samples_col = 2;
    else if (cfg.experiment == "anticonc") samples_col = 3;
    if (samples_col >= 0) {
        for (const auto& row : rows) {
            std::istringstream is(row);
            std::string f;
            std::vector<std::string> fs;
            while (std::getline(is, f, ',')) fs.push_back(f);
            if (static_cast<int>(fs.size()) <= samples_col ||
                fs[samples_col] != std::to_string(cfg.n_samples))
                throw ConfigError("manifest rows disagree with config n_samples");
        }
    }
    ExperimentReport fresh = run_experiment(cfg, workers);
    if (fresh.csv_rows != rows) {
        size_t first = 0;
        while (first < fresh.csv_rows.size() && first < rows.size() &&
               fresh.csv_rows[first] == rows[first])
            ++first;
        std::ostringstream os;
        os << "replay divergence at row " << first << " of " << rows.size() << ": expected \""
           << (first < rows.size() ? rows[first] : std::string("<missing>")) << "\" got \""
           << (first < fresh.csv_rows.size() ? fresh.csv_rows[first] : std::string("<missing>"))
           << "\"";
        throw ReplayDivergence(os.str());
    }
    return fresh;
}

} // namespace rrd
