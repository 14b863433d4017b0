#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rrd/digraph.hpp"
#include "rrd/exact.hpp"
#include "rrd/rng.hpp"
#include "rrd/sampler.hpp"
#include "rrd/stats.hpp"

namespace rrd {

// Shared subset-sweep engine: visits every subset of size 1..k_max when the
// total count fits the budget, otherwise a fixed number of uniform subsets
// per size. Returns whether the sweep was exhaustive and how many sets were
// visited.
struct SweepStats {
    uint64_t subsets_tested = 0;
    bool exhaustive = false;
};
SweepStats subset_sweep(uint32_t n, uint32_t k_max, uint64_t exhaustive_budget,
                        uint64_t sampled_per_size, Rng& rng,
                        const std::function<void(const std::vector<uint32_t>&)>& visit);

struct ExpansionReport {
    Rat epsilon;
    uint32_t k_max = 0;
    Rat worst_ratio;                 // min over tested S of |N^in(S)| / (d|S|)
    std::vector<uint32_t> worst_set;
    uint64_t subsets_tested = 0;
    bool exhaustive = false;
    bool gamma_member = false;       // exists tested S with ratio <= 1 - eps
    Rat isoper_min;                  // min |N^in(U)\U| / |U| over tested U
    std::vector<uint32_t> isoper_set;
    double lambda_effective = 0.0;   // k_max / n, the size cap of the isoperimetric sweep
};

ExpansionReport expansion_check(const Digraph& g, const Rat& epsilon, uint32_t k_max,
                                uint64_t budget, Rng& rng, uint64_t sampled_per_size = 10000);

enum class SearchMode { automatic, exact, heuristic };

struct ZeroMinorResult {
    bool found = false;
    std::vector<uint32_t> i_set, j_set;
    bool exact = false; // when true, "not found" is a proof
    uint64_t sets_examined = 0;
};

// Search for I, J with |I| >= l, |J| >= r and no edges from I to J. Exact
// mode scans all I of size l (J is then the complement of N^out(I));
// heuristic mode greedily grows I over random restarts.
ZeroMinorResult zero_minor_search(const Digraph& g, uint32_t l, uint32_t r,
                                  SearchMode mode, Rng& rng, uint64_t exact_budget = 1000000,
                                  uint32_t restarts = 50);

struct IndependenceResult {
    uint32_t size = 0;
    std::vector<uint32_t> set;
    bool exact = false;
};

// Largest I with no edges inside I x I (loop vertices are excluded).
// Branch-and-bound when n <= exact_cap, greedy plus local search above.
IndependenceResult independence_number(const Digraph& g, uint32_t exact_cap = 40);

struct OmegaReport {
    Rat epsilon;
    bool in_omega2 = false;          // all pairs: |supp(R_i + R_j)| >= 2(1-eps)d
    uint32_t min_pair_union = 0;
    bool in_omega_eps = false;       // all tested J: |S_J| >= (1-eps) d |J|
    bool omega_eps_exhaustive = false;
    Rat min_sj_ratio;
    uint32_t k_max = 0;
    uint64_t subsets_tested = 0;
};

OmegaReport omega_events(const Digraph& g, const Rat& epsilon, uint64_t j_budget, Rng& rng,
                         const Rat& c0 = Rat(1, 10));

// Rows i with |supp R_i ∩ J| >= beta/(2 alpha), exact count.
uint32_t row_support_density(const Digraph& g, const std::vector<uint32_t>& j_set,
                             const Rat& alpha, const Rat& beta);

enum class SampleMode { independent, stream };

struct AnticoncEstimate {
    std::vector<uint32_t> j_set;
    uint64_t samples = 0;
    double max_atom_hat = 0.0;
    double collision_hat = 0.0;
    double sigma = 0.0;
    uint64_t distinct = 0;
    bool frozen_present = false;
    bool conditional_heuristic = false; // conditional sampler carries no mixing certificate
    bool regime_flag_I = true;          // advisory: |I| <= d|J|/32
    bool regime_flag_J = true;          // advisory: 8 <= |J| <= 8n/d
    SampleMode mode = SampleMode::independent;
    uint64_t thinning = 0;              // stream mode only
};

/**
 * Draws N graphs (independent chains/matchings, or one thinned chain in
 * stream mode), hashes the delta vector of j_set, and reports the modal
 * frequency plus the unbiased pairwise collision estimate of sum_v P(v)^2.
 */
AnticoncEstimate delta_anticoncentration(uint32_t n, uint32_t d, const std::vector<uint32_t>& j_set,
                                         uint64_t n_samples, const FrozenColumnSet* frozen,
                                         const ChainConfig& cfg, Rng& rng,
                                         SampleMode mode = SampleMode::independent,
                                         uint64_t stream_thinning = 0);

struct ProjectionParams {
    std::vector<uint32_t> i_set, j_set, j_lambda; // partition of [n]
    std::vector<Rat> y;
    Rat a;
    std::vector<uint32_t> s_set;
};

struct ProjectionEstimate {
    uint64_t hits = 0, samples = 0;
    double frequency = 0.0;
    Interval wilson;
    double exponent_shape = 0.0; // exp(-d|J| ln(n/(d|J|))), constant 1, display only
};

// Monte Carlo frequency of ||P_S M y||_inf < a under the hypothesis
// y == lambda on J_lambda and y_j - lambda >= 2a on J (checked exactly; a
// violated clause is named in the thrown error).
ProjectionEstimate projection_anticoncentration(uint32_t n, uint32_t d, const ProjectionParams& params,
                                                uint64_t n_samples, const ChainConfig& cfg, Rng& rng);

} // namespace rrd
