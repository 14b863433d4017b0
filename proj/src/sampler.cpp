#include "rrd/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace rrd {

const char* ChainConfig::method_name(Method m) {
    switch (m) {
        case Method::automatic: return "auto";
        case Method::configuration: return "configuration";
        case Method::switching: return "switch";
    }
    return "auto";
}

ChainConfig::Method ChainConfig::method_parse(const std::string& s) {
    if (s == "auto") return Method::automatic;
    if (s == "configuration") return Method::configuration;
    if (s == "switch") return Method::switching;
    throw std::invalid_argument("unknown sampler method: " + s);
}

uint64_t default_burn_in(uint32_t n, uint32_t d) {
    double nd = static_cast<double>(n) * d;
    return static_cast<uint64_t>(std::ceil(20.0 * nd * std::log(nd + 1.0)));
}

bool configuration_model_recommended(uint32_t n, uint32_t d) {
    (void)n;
    if (d <= 4) return true;
    double est_acceptance = std::exp(-0.5 * (d - 1.0) * (d - 1.0));
    return est_acceptance >= 0.01;
}

Digraph sample_configuration(uint32_t n, uint32_t d, Rng& rng, uint64_t max_attempts) {
    if (d < 1 || d > n) throw std::invalid_argument("sample_configuration: need 1 <= d <= n");
    const uint64_t stubs = static_cast<uint64_t>(n) * d;
    std::vector<uint32_t> perm(stubs);
    std::vector<uint64_t> seen((static_cast<uint64_t>(n) * n + 63) / 64);
    for (uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::iota(perm.begin(), perm.end(), 0u);
        for (uint64_t k = stubs; k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
        std::fill(seen.begin(), seen.end(), 0);
        bool simple = true;
        for (uint64_t k = 0; k < stubs && simple; ++k) {
            uint64_t pair = (k / d) * n + perm[k] / d; // (out vertex, in vertex)
            uint64_t w = pair >> 6, b = pair & 63;
            if ((seen[w] >> b) & 1) simple = false;
            seen[w] |= 1ull << b;
        }
        if (!simple) continue; // resample the whole matching, keeping exact uniformity
        std::vector<std::vector<uint32_t>> out(n);
        for (uint64_t k = 0; k < stubs; ++k) out[k / d].push_back(perm[k] / d);
        return Digraph(n, d, std::move(out));
    }
    std::ostringstream os;
    os << "configuration model: no simple matching accepted after " << max_attempts
       << " attempts at n=" << n << " d=" << d << "; use the switch chain instead";
    throw InfeasibleError(os.str());
}

void SwitchChain::init_from(const std::vector<std::vector<uint32_t>>& out_adj) {
    words_ = (n_ + 63) / 64;
    row_bits_.assign(static_cast<size_t>(n_) * words_, 0);
    in_slots_.assign(n_, {});
    for (uint32_t j = 0; j < n_; ++j) in_slots_[j].reserve(d_);
    for (uint32_t i = 0; i < n_; ++i) {
        for (uint32_t j : out_adj[i]) {
            flip_edge(i, j);
            in_slots_[j].push_back(i);
        }
    }
}

SwitchChain::SwitchChain(uint32_t n, uint32_t d, Rng rng, std::optional<Digraph> start)
    : n_(n), d_(d), rng_(rng) {
    Digraph g = start ? std::move(*start) : Digraph::circulant(n, d);
    if (g.n() != n || g.d() != d) throw std::invalid_argument("switch chain: start graph has wrong (n,d)");
    free_cols_.resize(n);
    std::iota(free_cols_.begin(), free_cols_.end(), 0u);
    init_from(g.out_lists());
}

SwitchChain::SwitchChain(uint32_t n, uint32_t d, const FrozenColumnSet& frozen, Rng rng)
    : n_(n), d_(d), rng_(rng) {
    Digraph g = frozen_completion(n, d, frozen);
    std::vector<bool> is_frozen(n, false);
    for (uint32_t j : frozen.cols) is_frozen[j] = true;
    for (uint32_t j = 0; j < n; ++j)
        if (!is_frozen[j]) free_cols_.push_back(j);
    init_from(g.out_lists());
}

void SwitchChain::step() {
    ++steps_;
    const uint64_t slots = static_cast<uint64_t>(free_cols_.size()) * d_;
    if (slots < 2) { ++holds_; return; }
    uint64_t a = rng_.below(slots), b = rng_.below(slots);
    uint32_t j1 = free_cols_[a / d_], j2 = free_cols_[b / d_];
    uint32_t s1 = static_cast<uint32_t>(a % d_), s2 = static_cast<uint32_t>(b % d_);
    uint32_t i1 = in_slots_[j1][s1], i2 = in_slots_[j2][s2];
    if (j1 == j2 || i1 == i2 || has_edge(i1, j2) || has_edge(i2, j1)) { ++holds_; return; }
    // replace (i1,j1),(i2,j2) with (i1,j2),(i2,j1)
    in_slots_[j1][s1] = i2;
    in_slots_[j2][s2] = i1;
    flip_edge(i1, j1);
    flip_edge(i2, j2);
    flip_edge(i1, j2);
    flip_edge(i2, j1);
}

void SwitchChain::run(uint64_t steps) {
    for (uint64_t t = 0; t < steps; ++t) step();
}

void SwitchChain::delta_words(const std::vector<uint32_t>& j_set, std::vector<uint64_t>& out) const {
    out.assign(words_, 0);
    for (uint32_t j : j_set)
        for (uint32_t i : in_slots_[j]) out[i >> 6] |= 1ull << (i & 63);
}

Digraph SwitchChain::emit() const {
    std::vector<std::vector<uint32_t>> out(n_);
    for (uint32_t i = 0; i < n_; ++i) out[i].reserve(d_);
    for (uint32_t j = 0; j < n_; ++j)
        for (uint32_t i : in_slots_[j]) out[i].push_back(j);
    return Digraph(n_, d_, std::move(out));
}

Digraph sample_switch_chain(uint32_t n, uint32_t d, const ChainConfig& cfg, Rng& rng,
                            std::optional<Digraph> start) {
    SwitchChain chain(n, d, Rng(rng.next()), std::move(start));
    uint64_t burn = std::max(cfg.burn_in_steps, default_burn_in(n, d));
    chain.run(burn);
    return chain.emit();
}

Digraph sample_conditional(uint32_t n, uint32_t d, const FrozenColumnSet& frozen,
                           const ChainConfig& cfg, Rng& rng) {
    SwitchChain chain(n, d, frozen, Rng(rng.next()));
    uint64_t burn = std::max(cfg.burn_in_steps, default_burn_in(n, d));
    chain.run(burn);
    return chain.emit();
}

Digraph sample_auto(uint32_t n, uint32_t d, const ChainConfig& cfg, Rng& rng) {
    switch (cfg.method) {
        case ChainConfig::Method::configuration:
            return sample_configuration(n, d, rng);
        case ChainConfig::Method::switching:
            return sample_switch_chain(n, d, cfg, rng);
        case ChainConfig::Method::automatic:
            break;
    }
    if (d == n) return Digraph::circulant(n, d); // singleton space (all-ones matrix)
    if (configuration_model_recommended(n, d)) return sample_configuration(n, d, rng);
    return sample_switch_chain(n, d, cfg, rng);
}

bool frozen_feasible(uint32_t n, uint32_t d, const FrozenColumnSet& frozen, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (frozen.cols.size() != frozen.supports.size())
        return fail("frozen: cols/supports size mismatch");
    std::vector<bool> seen(n, false);
    std::vector<uint32_t> row_used(n, 0);
    for (size_t t = 0; t < frozen.cols.size(); ++t) {
        uint32_t j = frozen.cols[t];
        if (j >= n) return fail("frozen: column index out of range");
        if (seen[j]) return fail("frozen: duplicate column");
        seen[j] = true;
        const auto& sup = frozen.supports[t];
        if (sup.size() != d) return fail("frozen: support size != d");
        std::vector<bool> in_sup(n, false);
        for (uint32_t i : sup) {
            if (i >= n) return fail("frozen: row index out of range");
            if (in_sup[i]) return fail("frozen: duplicate row in support");
            in_sup[i] = true;
            if (++row_used[i] > d) return fail("frozen: a row appears in more than d frozen supports");
        }
    }
    // Gale-Ryser: residual row sums r_i against uniform column sums d on the
    // free columns.
    uint64_t nfree = n - frozen.cols.size();
    std::vector<uint64_t> r(n);
    uint64_t total = 0;
    for (uint32_t i = 0; i < n; ++i) {
        r[i] = d - row_used[i];
        total += r[i];
    }
    if (total != nfree * d) return fail("frozen: residual degree total mismatch");
    for (uint32_t i = 0; i < n; ++i)
        if (r[i] > nfree) return fail("frozen: a row needs more free columns than exist");
    std::sort(r.begin(), r.end(), std::greater<>());
    uint64_t prefix = 0;
    for (uint32_t k = 1; k <= n; ++k) {
        prefix += r[k - 1];
        if (prefix > nfree * std::min<uint64_t>(d, k))
            return fail("frozen: Gale-Ryser condition fails at k=" + std::to_string(k));
    }
    return true;
}

Digraph frozen_completion(uint32_t n, uint32_t d, const FrozenColumnSet& frozen) {
    std::string why;
    if (!frozen_feasible(n, d, frozen, &why)) throw InfeasibleError("infeasible frozen set: " + why);
    std::vector<std::vector<uint32_t>> cols_support(n);
    std::vector<uint32_t> residual(n, d);
    std::vector<bool> is_frozen(n, false);
    for (size_t t = 0; t < frozen.cols.size(); ++t) {
        uint32_t j = frozen.cols[t];
        is_frozen[j] = true;
        cols_support[j] = frozen.supports[t];
        for (uint32_t i : frozen.supports[t]) --residual[i];
    }
    // Fill free columns one at a time, always taking the d rows with the
    // largest residual (the constructive Gale-Ryser step).
    std::vector<uint32_t> order(n);
    for (uint32_t j = 0; j < n; ++j)
        if (!is_frozen[j]) {
            std::iota(order.begin(), order.end(), 0u);
            std::stable_sort(order.begin(), order.end(),
                             [&](uint32_t a, uint32_t b) { return residual[a] > residual[b]; });
            for (uint32_t t = 0; t < d; ++t) {
                uint32_t i = order[t];
                if (residual[i] == 0) throw InfeasibleError("completion failed (should be unreachable)");
                cols_support[j].push_back(i);
                --residual[i];
            }
        }
    std::vector<std::vector<uint32_t>> out(n);
    for (uint32_t j = 0; j < n; ++j)
        for (uint32_t i : cols_support[j]) out[i].push_back(j);
    return Digraph(n, d, std::move(out));
}

namespace {

struct EnumState {
    uint32_t n, d;
    std::vector<uint32_t> remaining; // column capacities
    std::vector<std::vector<uint32_t>> rows;
    const std::function<bool(const Digraph&)>* fn;
    bool stopped = false;

    bool emit() {
        Digraph g(n, d, rows);
        return (*fn)(g);
    }

    // Choose the next column >= from for row i; `picked` entries so far.
    void choose(uint32_t i, uint32_t from, uint32_t picked) {
        if (stopped) return;
        uint32_t rows_left_after = n - i - 1;
        if (picked == d) {
            // Prune: every column must still be fillable by the rows below.
            for (uint32_t j = 0; j < n; ++j)
                if (remaining[j] > rows_left_after) return;
            if (i + 1 == n) {
                if (!emit()) stopped = true;
                return;
            }
            fill_row(i + 1);
            return;
        }
        if (from >= n || n - from < d - picked) return;
        for (uint32_t j = from; j + (d - picked) <= n; ++j) {
            if (remaining[j] == 0) continue;
            rows[i].push_back(j);
            --remaining[j];
            choose(i, j + 1, picked + 1);
            ++remaining[j];
            rows[i].pop_back();
            if (stopped) return;
        }
    }

    void fill_row(uint32_t i) {
        rows[i].clear();
        choose(i, 0, 0);
    }
};

} // namespace

void enumerate_all(uint32_t n, uint32_t d, const std::function<bool(const Digraph&)>& fn,
                   uint32_t cap) {
    if (d < 1 || d > n) throw std::invalid_argument("enumerate_all: need 1 <= d <= n");
    if (n > cap) {
        std::ostringstream os;
        os << "enumerate_all: n=" << n << " exceeds cap " << cap << " (|M_{n,d}| = "
           << count_all(n, d).get_str() << " graphs)";
        throw std::invalid_argument(os.str());
    }
    EnumState st;
    st.n = n;
    st.d = d;
    st.remaining.assign(n, d);
    st.rows.assign(n, {});
    st.fn = &fn;
    st.fill_row(0);
}

Int count_all(uint32_t n, uint32_t d) {
    if (d < 1 || d > n) throw std::invalid_argument("count_all: need 1 <= d <= n");
    // Profile DP: layer = multiset of remaining column capacities, encoded as
    // counts per capacity value 0..d. Each row distributes its d ones across
    // the capacity classes.
    using Profile = std::vector<uint32_t>;
    std::map<Profile, Int> layer;
    Profile start(d + 1, 0);
    start[d] = n;
    layer[start] = 1;
    for (uint32_t row = 0; row < n; ++row) {
        uint32_t rows_left_after = n - row - 1;
        std::map<Profile, Int> next;
        for (const auto& [prof, ways] : layer) {
            // Enumerate how many columns to take from each capacity class.
            std::vector<uint32_t> take(d + 1, 0);
            std::function<void(uint32_t, uint32_t, Int)> rec = [&](uint32_t cls, uint32_t left, Int mult) {
                if (cls == 0) {
                    if (left != 0) return;
                    Profile np(d + 1, 0);
                    for (uint32_t c = 0; c <= d; ++c) {
                        np[c] += prof[c] - take[c];
                        if (c > 0) np[c - 1] += take[c];
                    }
                    for (uint32_t c = rows_left_after + 1; c <= d; ++c)
                        if (np[c] > 0) return; // some column can no longer be filled
                    next[np] += ways * mult;
                    return;
                }
                uint32_t cmax = std::min(left, prof[cls]);
                for (uint32_t t = 0; t <= cmax; ++t) {
                    take[cls] = t;
                    rec(cls - 1, left - t, mult * binomial(prof[cls], t));
                }
                take[cls] = 0;
            };
            rec(d, d, 1);
        }
        layer = std::move(next);
    }
    Profile done(d + 1, 0);
    done[0] = n;
    auto it = layer.find(done);
    return it == layer.end() ? Int(0) : it->second;
}

} // namespace rrd
