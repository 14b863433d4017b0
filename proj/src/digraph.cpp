#include "rrd/digraph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rrd {

const char* switch_status_name(SwitchStatus s) {
    switch (s) {
        case SwitchStatus::applied: return "applied";
        case SwitchStatus::degenerate_indices: return "degenerate_indices";
        case SwitchStatus::missing_edge: return "missing_edge";
        case SwitchStatus::would_duplicate: return "would_duplicate";
    }
    return "unknown";
}

Digraph::Digraph(uint32_t n, uint32_t d, std::vector<std::vector<uint32_t>> out_adj)
    : n_(n), d_(d), words_((n + 63) / 64), out_adj_(std::move(out_adj)) {
    if (n == 0) throw std::invalid_argument("digraph: n must be positive");
    if (d < 1 || d > n) throw std::invalid_argument("digraph: need 1 <= d <= n");
    if (out_adj_.size() != n) throw std::invalid_argument("digraph: out_adj size != n");

    row_bits_.assign(static_cast<size_t>(n) * words_, 0);
    col_bits_.assign(static_cast<size_t>(n) * words_, 0);
    in_adj_.assign(n, {});
    std::vector<uint32_t> col_sum(n, 0);

    for (uint32_t i = 0; i < n; ++i) {
        auto& row = out_adj_[i];
        if (row.size() != d) throw std::invalid_argument("digraph: row has wrong degree");
        std::sort(row.begin(), row.end());
        for (size_t t = 0; t < row.size(); ++t) {
            uint32_t j = row[t];
            if (j >= n) throw std::invalid_argument("digraph: vertex index out of range");
            if (t > 0 && row[t - 1] == j) throw std::invalid_argument("digraph: duplicate edge in row");
            row_bits_[static_cast<size_t>(i) * words_ + (j >> 6)] |= 1ull << (j & 63);
            col_bits_[static_cast<size_t>(j) * words_ + (i >> 6)] |= 1ull << (i & 63);
            ++col_sum[j];
            in_adj_[j].push_back(i);
        }
    }
    for (uint32_t j = 0; j < n; ++j) {
        if (col_sum[j] != d) throw std::invalid_argument("digraph: column sum != d");
        // in_adj_[j] is already sorted: rows were visited in increasing order.
    }
}

Digraph Digraph::circulant(uint32_t n, uint32_t d) {
    std::vector<std::vector<uint32_t>> out(n);
    for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t t = 0; t < d; ++t) out[i].push_back((i + t) % n);
        std::sort(out[i].begin(), out[i].end());
    }
    return Digraph(n, d, std::move(out));
}

void Digraph::check_vertex_set(const std::vector<uint32_t>& s) const {
    for (uint32_t v : s)
        if (v >= n_) throw std::invalid_argument("vertex index out of range");
}

BitVec Digraph::n_in_bits(const std::vector<uint32_t>& s) const {
    check_vertex_set(s);
    BitVec acc(n_);
    for (uint32_t j : s) {
        const uint64_t* col = col_bits(j);
        for (size_t w = 0; w < words_; ++w)
            acc.data()[w] |= col[w];
    }
    return acc;
}

std::vector<uint32_t> Digraph::n_in(const std::vector<uint32_t>& s) const {
    return n_in_bits(s).to_list();
}

BitVec Digraph::n_out_bits(const std::vector<uint32_t>& s) const {
    check_vertex_set(s);
    BitVec acc(n_);
    for (uint32_t i : s) {
        const uint64_t* row = row_bits(i);
        for (size_t w = 0; w < words_; ++w)
            acc.data()[w] |= row[w];
    }
    return acc;
}

std::vector<uint32_t> Digraph::n_out(const std::vector<uint32_t>& s) const {
    return n_out_bits(s).to_list();
}

uint64_t Digraph::edges_between(const std::vector<uint32_t>& i_set, const std::vector<uint32_t>& j_set,
                                std::vector<std::pair<uint32_t, uint32_t>>* edges) const {
    check_vertex_set(i_set);
    BitVec jmask = BitVec::from_list(n_, j_set);
    for (uint32_t v : j_set)
        if (v >= n_) throw std::invalid_argument("vertex index out of range");
    uint64_t count = 0;
    for (uint32_t i : i_set) {
        const uint64_t* row = row_bits(i);
        count += and_count(row, jmask.raw().data(), words_);
        if (edges) {
            for (uint32_t j : out_adj_[i])
                if (jmask.test(j)) edges->emplace_back(i, j);
        }
    }
    return count;
}

std::vector<uint32_t> Digraph::co_out(uint32_t u, uint32_t v) const {
    if (u == v) throw std::invalid_argument("co_out: u == v");
    if (u >= n_ || v >= n_) throw std::invalid_argument("vertex index out of range");
    BitVec acc(n_);
    const uint64_t *a = row_bits(u), *b = row_bits(v);
    for (size_t w = 0; w < words_; ++w)
        acc.data()[w] = a[w] & b[w];
    return acc.to_list();
}

std::vector<uint32_t> Digraph::co_in(uint32_t u, uint32_t v) const {
    if (u == v) throw std::invalid_argument("co_in: u == v");
    if (u >= n_ || v >= n_) throw std::invalid_argument("vertex index out of range");
    BitVec acc(n_);
    const uint64_t *a = col_bits(u), *b = col_bits(v);
    for (size_t w = 0; w < words_; ++w)
        acc.data()[w] = a[w] & b[w];
    return acc.to_list();
}

size_t Digraph::co_out_count(uint32_t u, uint32_t v) const {
    if (u == v) throw std::invalid_argument("co_out: u == v");
    return and_count(row_bits(u), row_bits(v), words_);
}

bool Digraph::in_dco(const Rat& eps) const {
    Rat cap = eps * d_;
    for (uint32_t u = 0; u + 1 < n_; ++u)
        for (uint32_t v = u + 1; v < n_; ++v)
            if (Rat(static_cast<unsigned long>(co_out_count(u, v))) > cap) return false;
    return true;
}

SwitchStatus Digraph::validate_switching(const SwitchingMove& m) const {
    if (m.i1 >= n_ || m.i2 >= n_ || m.j1 >= n_ || m.j2 >= n_)
        throw std::invalid_argument("switching: vertex index out of range");
    if (m.i1 == m.i2 || m.j1 == m.j2) return SwitchStatus::degenerate_indices;
    if (!has_edge(m.i1, m.j1) || !has_edge(m.i2, m.j2)) return SwitchStatus::missing_edge;
    if (has_edge(m.i1, m.j2) || has_edge(m.i2, m.j1)) return SwitchStatus::would_duplicate;
    return SwitchStatus::applied;
}

std::pair<SwitchStatus, std::optional<Digraph>> Digraph::apply_switching(const SwitchingMove& m) const {
    SwitchStatus st = validate_switching(m);
    if (st != SwitchStatus::applied) return {st, std::nullopt};
    auto out = out_adj_;
    auto replace = [](std::vector<uint32_t>& row, uint32_t from, uint32_t to) {
        *std::find(row.begin(), row.end(), from) = to;
    };
    replace(out[m.i1], m.j1, m.j2);
    replace(out[m.i2], m.j2, m.j1);
    return {st, Digraph(n_, d_, std::move(out))};
}

Digraph Digraph::complement() const {
    if (d_ == n_) throw std::invalid_argument("complement: d == n would give a 0-regular graph");
    std::vector<std::vector<uint32_t>> out(n_);
    for (uint32_t i = 0; i < n_; ++i) {
        out[i].reserve(n_ - d_);
        for (uint32_t j = 0; j < n_; ++j)
            if (!has_edge(i, j)) out[i].push_back(j);
    }
    return Digraph(n_, n_ - d_, std::move(out));
}

std::string Digraph::serialize() const {
    std::ostringstream os;
    os << n_ << ' ' << d_ << '\n';
    for (uint32_t i = 0; i < n_; ++i) {
        for (size_t t = 0; t < out_adj_[i].size(); ++t) {
            if (t) os << ' ';
            os << out_adj_[i][t];
        }
        os << '\n';
    }
    return os.str();
}

Digraph Digraph::parse_stream(std::istream& in) {
    uint32_t n = 0, d = 0;
    if (!(in >> n >> d)) throw std::invalid_argument("graph parse: bad header line");
    std::vector<std::vector<uint32_t>> out(n);
    for (uint32_t i = 0; i < n; ++i) {
        out[i].resize(d);
        for (uint32_t t = 0; t < d; ++t)
            if (!(in >> out[i][t]))
                throw std::invalid_argument("graph parse: truncated row " + std::to_string(i));
    }
    return Digraph(n, d, std::move(out));
}

Digraph Digraph::parse(const std::string& text) {
    std::istringstream is(text);
    Digraph g = parse_stream(is);
    return g;
}

std::vector<uint32_t> Digraph::flat_key() const {
    std::vector<uint32_t> key;
    key.reserve(static_cast<size_t>(n_) * d_);
    for (const auto& row : out_adj_) key.insert(key.end(), row.begin(), row.end());
    return key;
}

DeltaVector delta_vector(const Digraph& g, const std::vector<uint32_t>& j_set) {
    if (j_set.empty()) throw std::invalid_argument("delta_vector: empty column set");
    DeltaVector dv{g.n_in_bits(j_set), j_set};
    return dv;
}

} // namespace rrd
