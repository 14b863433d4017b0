#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrd/digraph.hpp"
#include "rrd/exact.hpp"

namespace rrd {

using IntMatrix = std::vector<std::vector<Int>>;

IntMatrix to_matrix(const Digraph& g);
IntMatrix transpose(const IntMatrix& m);

// Rank over GF(p) by in-place elimination with pivoting on the first nonzero
// entry; p must be a machine-word prime. Always a lower bound on the exact
// rank.
uint32_t rank_mod_p(const IntMatrix& m, uint64_t p);

// Exact rank over Q via fraction-free (Bareiss) integer elimination.
uint32_t exact_rank(const IntMatrix& m);

// Basis of the rational right kernel, returned as integer vectors with
// coprime entries and positive leading sign. Empty for full column rank.
std::vector<std::vector<Int>> kernel_basis(const IntMatrix& m);

enum class WitnessKind { full_rank_mod_p, kernel_vectors };

/**
 * Exact singularity verdict with a machine-checkable witness: either a prime
 * (with pivot order) modulo which the matrix has full rank, or exact integer
 * left and right null vectors. A "singular" verdict is always confirmed by
 * integer elimination, never by modular arithmetic alone.
 */
struct RankCertificate {
    uint32_t rank = 0;
    bool singular = false;
    WitnessKind witness_kind = WitnessKind::full_rank_mod_p;
    uint64_t prime = 0;                 // full-rank witness
    std::vector<uint32_t> pivot_rows;   // row order of the witnessing elimination
    std::vector<Int> null_right;        // M x = 0
    std::vector<Int> null_left;         // y^T M = 0

    bool verify(const IntMatrix& m) const;
    std::string to_json() const;
};

RankCertificate is_singular(const IntMatrix& m);
RankCertificate is_singular(const Digraph& g);

struct AcReport {
    Rat p;
    bool is_almost_constant = false;
    std::optional<Rat> lambda; // present iff almost constant
    uint64_t match_count = 0;  // multiplicity of the most frequent value
};

// Almost-constant check: is some value attained by at least (1-p)n of the
// coordinates? Exact comparisons; requires x != 0 and 0 < p < 1/2.
AcReport ac_check(const std::vector<Rat>& x, const Rat& p);
AcReport ac_check(const std::vector<Int>& x, const Rat& p);

enum class EacVerdict { certified_true, certified_false, heuristic_true };

const char* eac_verdict_name(EacVerdict v);

struct EacReport {
    EacVerdict verdict = EacVerdict::certified_true;
    uint32_t right_dim = 0, left_dim = 0;
    uint64_t combos_tested = 0;
    // Witness when certified_false: a null vector in AC(p) and its side.
    std::optional<std::vector<Int>> witness;
    bool witness_is_left = false;

    bool value() const { return verdict != EacVerdict::certified_false; }
};

/**
 * Does the matrix avoid almost-constant null vectors on both sides?
 * Certified when every kernel is trivial or one-dimensional; for kernels of
 * dimension >= 2 the search covers deterministic small-integer combinations
 * plus a random budget and the result is labeled heuristic when clean.
 */
EacReport eac_event(const IntMatrix& m, const Rat& p, uint64_t random_budget = 1000);
EacReport eac_event(const Digraph& g, const Rat& p, uint64_t random_budget = 1000);

} // namespace rrd
