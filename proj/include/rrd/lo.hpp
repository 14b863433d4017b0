#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rrd/digraph.hpp"
#include "rrd/exact.hpp"
#include "rrd/rng.hpp"
#include "rrd/stats.hpp"

namespace rrd {

// Exact number of t-subsets of `values` whose elements sum to `target`,
// meet-in-the-middle over exact rational sums.
Int count_subsets_with_sum(const std::vector<Rat>& values, uint32_t t, const Rat& target);

// Full distribution of t-subset sums: achievable sum -> subset count.
// Refuses (std::invalid_argument) when the half-table product exceeds the
// guard, since the distinct-sum support can be as large as C(m, t).
std::map<Rat, Int> subset_sum_distribution(const std::vector<Rat>& values, uint32_t t,
                                           uint64_t pair_guard = (1ull << 26));

struct SubsetSumAtomQuery {
    std::vector<Rat> v; // length 2d
    uint32_t k = 0;     // size of a value-separated block (validated)
    Rat a;              // target sum
};

// P(v_B = a) for B uniform over d-subsets of [2d], as an exact rational.
// Validates that some J of size k separates values across its boundary.
Rat atom_probability(const SubsetSumAtomQuery& q);

// Maximum atom of the v_B distribution over all achievable targets.
Rat max_atom(const std::vector<Rat>& v);

// Exact maximal atom of sum xi_i * x_i for independent two-valued xi_i
// (value pairs in `xi`, default ±1 each w.p. 1/2), by table convolution.
Rat erdos_lo_max_atom(const std::vector<Rat>& x,
                      const std::vector<std::pair<Rat, Rat>>* xi = nullptr,
                      uint32_t cap = 24, uint64_t support_guard = (1ull << 22));

struct PermPairEstimate {
    uint32_t k = 0, d = 0;
    uint64_t n_samples = 0;
    uint64_t hits = 0; // |E(pi)| <= k/50, exact rational threshold
    double frequency = 0.0;
    Interval wilson;
    double reference_bound = 0.0; // (k/(1.1 d))^{k/3}
};

// Samples N uniform permutations of [2d] against the canonical vector with
// k ones; E(pi) counts the positions i <= d where x_{pi(i)} != x_{pi(i+d)}.
PermPairEstimate permutation_pair_estimate(uint32_t k, uint32_t d, uint64_t n_samples, Rng& rng);

enum class ShuffleOutcome { ok, not_witnessed, class_too_large };

const char* shuffle_outcome_name(ShuffleOutcome o);

/**
 * The one-row shuffle experiment on rows (i1,i2): builds the span of the
 * other rows together with R_{i1}+R_{i2}, takes an exact basis of its
 * orthogonal complement, picks the test vector v maximizing the number of
 * non-modal coordinates on supp(R_{i1}+R_{i2}) (basis vectors plus
 * `combo_budget` random integer combinations, lexicographic tie-break), and
 * exactly counts the class members -- all C(|S|, d-m2) supports of row i1 --
 * with <v, R_1> = 0.
 */
struct ShuffleClassReport {
    ShuffleOutcome outcome = ShuffleOutcome::ok;
    uint32_t q = 0;           // separation requested (or witnessed, in auto mode)
    uint32_t q_witnessed = 0; // best attainable separation over the search
    Rat epsilon;
    uint32_t m1 = 0, m2 = 0;  // |supp R_1 ∪ supp R_2|, |supp R_1 ∩ supp R_2|
    Int class_size = 0;       // C(|S|, d - m2)
    Int zero_count = 0;
    Rat zero_fraction;
    std::vector<Int> v;       // chosen test vector (coprime integers)
    Rat target;               // a = -sum of v over the shared support
    std::optional<double> bound;      // 10 / sqrt(q - 2 eps d), when q > 2 eps d
    std::optional<bool> bound_holds;  // exact comparison zero_fraction <= bound
    uint32_t min_pair_union = 0;
    // The conditioning events are measured, not enforced: the global
    // all-pairs overlap event, and the pair-level consequence m2 <= 2 eps d
    // that the bound derivation actually consumes.
    bool in_omega2 = false;
    bool pair_overlap_ok = false;
};

ShuffleClassReport shuffle_class_experiment(const Digraph& g, uint32_t q, const Rat& epsilon,
                                            Rng& rng, uint32_t i1 = 0, uint32_t i2 = 1,
                                            uint32_t combo_budget = 200);

// Auto variant used by the harness: q as large as witnessed, eps = q/(4d).
ShuffleClassReport shuffle_class_auto(const Digraph& g, Rng& rng, uint32_t i1 = 0, uint32_t i2 = 1,
                                      uint32_t combo_budget = 200);

} // namespace rrd
