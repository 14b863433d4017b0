#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrd/digraph.hpp"
#include "rrd/exact.hpp"
#include "rrd/rng.hpp"

namespace rrd {

// A set I of frozen columns with their fixed supports: the sampled graph
// must satisfy supp X_j = supports[t] for every frozen column j = cols[t].
struct FrozenColumnSet {
    std::vector<uint32_t> cols;
    std::vector<std::vector<uint32_t>> supports; // each of size exactly d

    bool empty() const { return cols.empty(); }
};

struct ChainConfig {
    uint64_t burn_in_steps = 0; // 0 = automatic floor (see default_burn_in)
    uint64_t thinning = 1;      // steps between consecutive stream emissions
    uint64_t seed = 0;
    enum class Method { automatic, configuration, switching } method = Method::automatic;

    static const char* method_name(Method m);
    static Method method_parse(const std::string& s);
};

// Proposed-move floor validated against enumeration on tiny instances;
// callers may only raise it.
uint64_t default_burn_in(uint32_t n, uint32_t d);

// True when the configuration-model rejection rate is acceptable (d <= 4 or
// estimated acceptance >= 1%).
bool configuration_model_recommended(uint32_t n, uint32_t d);

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exactly uniform sample: uniform stub matching, resampled from scratch on
// any duplicate ordered pair. Throws InfeasibleError with advice to use the
// switch chain once max_attempts is exhausted.
Digraph sample_configuration(uint32_t n, uint32_t d, Rng& rng, uint64_t max_attempts = 200000);

/**
 * Hold-on-invalid simple-switching chain. Each step draws two edge slots
 * uniformly, proposes the switching and applies it when valid. The proposal
 * is symmetric, so the uniform distribution on the state space is
 * stationary. With a frozen column set, proposals are restricted to edges
 * landing in free columns, which preserves the frozen supports; the state
 * space is all completions and switchings connect it (fixed-margin 0/1
 * matrices are switch-connected).
 */
class SwitchChain {
public:
    // Unrestricted chain from an explicit start (or the circulant default).
    SwitchChain(uint32_t n, uint32_t d, Rng rng, std::optional<Digraph> start = std::nullopt);
    // Column-restricted chain on the completions of a frozen set; throws
    // InfeasibleError when no completion exists.
    SwitchChain(uint32_t n, uint32_t d, const FrozenColumnSet& frozen, Rng rng);

    void step();
    void run(uint64_t steps);
    Digraph emit() const;

    // delta^J of the current state without materializing a Digraph
    // (words = ceil(n/64) packed bits, one per row).
    void delta_words(const std::vector<uint32_t>& j_set, std::vector<uint64_t>& out) const;

    uint64_t steps_taken() const { return steps_; }
    uint64_t holds() const { return holds_; }

private:
    uint32_t n_, d_;
    std::vector<uint32_t> free_cols_;           // columns eligible for switching
    std::vector<std::vector<uint32_t>> in_slots_; // in-neighbors per column, slot-addressed
    std::vector<uint64_t> row_bits_;
    size_t words_;
    Rng rng_;
    uint64_t steps_ = 0, holds_ = 0;

    void init_from(const std::vector<std::vector<uint32_t>>& out_adj);
    bool has_edge(uint32_t i, uint32_t j) const {
        return (row_bits_[static_cast<size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1;
    }
    void flip_edge(uint32_t i, uint32_t j) {
        row_bits_[static_cast<size_t>(i) * words_ + (j >> 6)] ^= 1ull << (j & 63);
    }
};

Digraph sample_switch_chain(uint32_t n, uint32_t d, const ChainConfig& cfg, Rng& rng,
                            std::optional<Digraph> start = std::nullopt);

// Uniform-on-completions sampler for D(I,F); validated empirically and
// flagged heuristic in reports (no mixing certificate is claimed).
Digraph sample_conditional(uint32_t n, uint32_t d, const FrozenColumnSet& frozen,
                           const ChainConfig& cfg, Rng& rng);

// Method dispatch used by the experiment driver.
Digraph sample_auto(uint32_t n, uint32_t d, const ChainConfig& cfg, Rng& rng);

// Feasibility of a frozen column set (Gale-Ryser completion check).
bool frozen_feasible(uint32_t n, uint32_t d, const FrozenColumnSet& frozen, std::string* why = nullptr);

// Greedy largest-residual completion; throws InfeasibleError when infeasible.
Digraph frozen_completion(uint32_t n, uint32_t d, const FrozenColumnSet& frozen);

/**
 * Exhaustive enumeration of M_{n,d} by row-by-row backtracking over
 * d-subsets with remaining-column-capacity pruning. The callback returns
 * false to stop early. Refuses (std::invalid_argument) when n exceeds the
 * cap; the message carries the exact cardinality as the estimated cost.
 */
void enumerate_all(uint32_t n, uint32_t d, const std::function<bool(const Digraph&)>& fn,
                   uint32_t cap = 6);

// |M_{n,d}| without materializing, via dynamic programming over the profile
// of remaining column capacities (an independent route from enumerate_all).
Int count_all(uint32_t n, uint32_t d);

} // namespace rrd
