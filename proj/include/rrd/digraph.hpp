#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rrd/bitvec.hpp"
#include "rrd/exact.hpp"

namespace rrd {

struct SwitchingMove {
    uint32_t i1, j1, i2, j2;
};

enum class SwitchStatus {
    applied,
    degenerate_indices, // i1 == i2 or j1 == j2
    missing_edge,       // (i1,j1) or (i2,j2) not present
    would_duplicate,    // (i1,j2) or (i2,j1) already present
};

const char* switch_status_name(SwitchStatus s);

/**
 * Immutable d-regular digraph on n labeled vertices (0-indexed), identified
 * with its 0/1 adjacency matrix: row i = out-neighbors of i, column j =
 * in-neighbors of j, every row and column has exactly d ones. Loops and
 * anti-parallel edges are allowed, multi-edges are not.
 *
 * Adjacency is stored both as sorted neighbor lists and as packed bit rows;
 * the bit rows are the canonical form for rank and intersection queries.
 * All queries are const and safe to call concurrently.
 */
class Digraph {
public:
    // Validates all invariants; throws std::invalid_argument on violation.
    Digraph(uint32_t n, uint32_t d, std::vector<std::vector<uint32_t>> out_adj);

    static Digraph circulant(uint32_t n, uint32_t d);

    uint32_t n() const { return n_; }
    uint32_t d() const { return d_; }
    size_t row_words() const { return words_; }

    const std::vector<uint32_t>& out_neighbors(uint32_t i) const { return out_adj_[i]; }
    const std::vector<uint32_t>& in_neighbors(uint32_t j) const { return in_adj_[j]; }
    const std::vector<std::vector<uint32_t>>& out_lists() const { return out_adj_; }

    bool has_edge(uint32_t i, uint32_t j) const {
        return (row_bits_[static_cast<size_t>(i) * words_ + (j >> 6)] >> (j & 63)) & 1;
    }

    // Row i of the adjacency matrix (supp R_i) as packed words.
    const uint64_t* row_bits(uint32_t i) const { return row_bits_.data() + static_cast<size_t>(i) * words_; }
    // Column j (supp X_j), i.e. the in-neighborhood of j, as packed words.
    const uint64_t* col_bits(uint32_t j) const { return col_bits_.data() + static_cast<size_t>(j) * words_; }

    // N^in(S): all vertices with an out-edge into S.
    std::vector<uint32_t> n_in(const std::vector<uint32_t>& s) const;
    BitVec n_in_bits(const std::vector<uint32_t>& s) const;

    // N^out(S): all vertices receiving an edge from S.
    std::vector<uint32_t> n_out(const std::vector<uint32_t>& s) const;
    BitVec n_out_bits(const std::vector<uint32_t>& s) const;

    // |E(I,J)| and optionally the edges themselves.
    uint64_t edges_between(const std::vector<uint32_t>& i_set, const std::vector<uint32_t>& j_set,
                           std::vector<std::pair<uint32_t, uint32_t>>* edges = nullptr) const;

    // Common out-neighbors supp R_u ∩ supp R_v; u != v required.
    std::vector<uint32_t> co_out(uint32_t u, uint32_t v) const;
    std::vector<uint32_t> co_in(uint32_t u, uint32_t v) const;
    size_t co_out_count(uint32_t u, uint32_t v) const;

    // True iff every pair of distinct vertices has at most eps*d common
    // out-neighbors (exact rational comparison).
    bool in_dco(const Rat& eps) const;

    SwitchStatus validate_switching(const SwitchingMove& m) const;
    // Returns the switched graph, or nullopt with the reason code; callers
    // running a Markov chain treat rejection as "hold".
    std::pair<SwitchStatus, std::optional<Digraph>> apply_switching(const SwitchingMove& m) const;

    // (n-d)-regular graph with adjacency J_n - M; rejected when d == n.
    Digraph complement() const;

    // Text format: line 1 "n d", then n lines of sorted out-neighbors.
    std::string serialize() const;
    static Digraph parse(const std::string& text);
    static Digraph parse_stream(std::istream& in);

    bool operator==(const Digraph& o) const {
        return n_ == o.n_ && d_ == o.d_ && out_adj_ == o.out_adj_;
    }

    // Dense key for hashing/state-indexing in enumeration tests.
    std::vector<uint32_t> flat_key() const;

private:
    uint32_t n_, d_;
    size_t words_;
    std::vector<std::vector<uint32_t>> out_adj_;
    std::vector<std::vector<uint32_t>> in_adj_;
    std::vector<uint64_t> row_bits_;
    std::vector<uint64_t> col_bits_;

    void check_vertex_set(const std::vector<uint32_t>& s) const;
};

/**
 * The 0/1 indicator δ^J of rows meeting the column set J:
 * bits[i] = 1 iff i ∈ N^in(J), i.e. supp R_i ∩ J ≠ ∅.
 */
struct DeltaVector {
    BitVec bits;
    std::vector<uint32_t> j_set;

    size_t support_size() const { return bits.count(); }
};

DeltaVector delta_vector(const Digraph& g, const std::vector<uint32_t>& j_set);

} // namespace rrd
