#include "rrd/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace rrd {

namespace {

bool next_combination(std::vector<uint32_t>& idx, uint32_t n) {
    const uint32_t k = static_cast<uint32_t>(idx.size());
    for (uint32_t t = k; t-- > 0;) {
        if (idx[t] < n - k + t) {
            ++idx[t];
            for (uint32_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<uint32_t> random_subset(uint32_t n, uint32_t k, Rng& rng, std::vector<uint32_t>& scratch) {
    if (scratch.size() != n) {
        scratch.resize(n);
        std::iota(scratch.begin(), scratch.end(), 0u);
    }
    for (uint32_t t = 0; t < k; ++t) {
        uint64_t pick = t + rng.below(n - t);
        std::swap(scratch[t], scratch[pick]);
    }
    std::vector<uint32_t> out(scratch.begin(), scratch.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

SweepStats subset_sweep(uint32_t n, uint32_t k_max, uint64_t exhaustive_budget,
                        uint64_t sampled_per_size, Rng& rng,
                        const std::function<void(const std::vector<uint32_t>&)>& visit) {
    if (k_max < 1 || k_max > n) throw std::invalid_argument("subset_sweep: need 1 <= k_max <= n");
    Int total = 0;
    for (uint32_t k = 1; k <= k_max; ++k) total += binomial(n, k);
    SweepStats stats;
    stats.exhaustive = total <= Int(static_cast<unsigned long>(exhaustive_budget));
    if (stats.exhaustive) {
        for (uint32_t k = 1; k <= k_max; ++k) {
            std::vector<uint32_t> idx(k);
            std::iota(idx.begin(), idx.end(), 0u);
            do {
                visit(idx);
                ++stats.subsets_tested;
            } while (next_combination(idx, n));
        }
    } else {
        std::vector<uint32_t> scratch;
        for (uint32_t k = 1; k <= k_max; ++k) {
            Int cnk = binomial(n, k);
            uint64_t want = sampled_per_size;
            if (cnk <= Int(static_cast<unsigned long>(sampled_per_size))) {
                // Cheaper to enumerate this size outright.
                std::vector<uint32_t> idx(k);
                std::iota(idx.begin(), idx.end(), 0u);
                do {
                    visit(idx);
                    ++stats.subsets_tested;
                } while (next_combination(idx, n));
                continue;
            }
            for (uint64_t t = 0; t < want; ++t) {
                visit(random_subset(n, k, rng, scratch));
                ++stats.subsets_tested;
            }
        }
    }
    return stats;
}

ExpansionReport expansion_check(const Digraph& g, const Rat& epsilon, uint32_t k_max,
                                uint64_t budget, Rng& rng, uint64_t sampled_per_size) {
    const uint32_t n = g.n();
    if (k_max < 1 || k_max > n) throw std::invalid_argument("expansion_check: need 1 <= k_max <= n");
    ExpansionReport rep;
    rep.epsilon = epsilon;
    rep.k_max = k_max;
    rep.lambda_effective = static_cast<double>(k_max) / n;
    rep.worst_ratio = 2; // above any attainable ratio
    rep.isoper_min = Rat(static_cast<unsigned long>(n));
    BitVec acc(n);
    auto stats = subset_sweep(n, k_max, budget, sampled_per_size, rng, [&](const std::vector<uint32_t>& s) {
        acc.clear();
        for (uint32_t j : s) {
            const uint64_t* col = g.col_bits(j);
            for (size_t w = 0; w < g.row_words(); ++w) acc.data()[w] |= col[w];
        }
        size_t nin = acc.count();
        Rat ratio(static_cast<unsigned long>(nin),
                  static_cast<unsigned long>(g.d()) * static_cast<unsigned long>(s.size()));
        ratio.canonicalize();
        if (ratio < rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_set = s;
        }
        // Vertex boundary for the isoperimetric sweep.
        size_t inside = 0;
        for (uint32_t j : s) inside += acc.test(j) ? 1 : 0;
        Rat iso(static_cast<unsigned long>(nin - inside), static_cast<unsigned long>(s.size()));
        iso.canonicalize();
        if (iso < rep.isoper_min) {
            rep.isoper_min = iso;
            rep.isoper_set = s;
        }
    });
    rep.subsets_tested = stats.subsets_tested;
    rep.exhaustive = stats.exhaustive;
    rep.gamma_member = rep.worst_ratio <= Rat(1) - epsilon;
    return rep;
}

ZeroMinorResult zero_minor_search(const Digraph& g, uint32_t l, uint32_t r,
                                  SearchMode mode, Rng& rng, uint64_t exact_budget,
                                  uint32_t restarts) {
    const uint32_t n = g.n();
    if (l < 1 || l > n || r < 1 || r > n)
        throw std::invalid_argument("zero_minor_search: need 1 <= l, r <= n");
    ZeroMinorResult res;
    bool exact = mode == SearchMode::exact ||
                 (mode == SearchMode::automatic &&
                  binomial(n, l) <= Int(static_cast<unsigned long>(exact_budget)));
    if (mode == SearchMode::exact && binomial(n, l) > Int(static_cast<unsigned long>(exact_budget)))
        throw std::invalid_argument("zero_minor_search: exact mode exceeds budget");
    BitVec acc(n);
    auto complement_of_nout = [&](const std::vector<uint32_t>& i_set) {
        acc.clear();
        for (uint32_t i : i_set) {
            const uint64_t* row = g.row_bits(i);
            for (size_t w = 0; w < g.row_words(); ++w) acc.data()[w] |= row[w];
        }
        return static_cast<uint32_t>(n - acc.count());
    };
    auto collect_j = [&]() {
        std::vector<uint32_t> j;
        for (uint32_t v = 0; v < n; ++v)
            if (!acc.test(v)) j.push_back(v);
        return j;
    };
    if (exact) {
        res.exact = true;
        std::vector<uint32_t> idx(l);
        std::iota(idx.begin(), idx.end(), 0u);
        do {
            ++res.sets_examined;
            if (complement_of_nout(idx) >= r) {
                res.found = true;
                res.i_set = idx;
                res.j_set = collect_j();
                return res;
            }
        } while (next_combination(idx, n));
        return res;
    }
    // Greedy growth minimizing |N^out(I)|, random restarts; inconclusive when
    // nothing is found.
    res.exact = false;
    for (uint32_t t = 0; t < restarts; ++t) {
        std::vector<uint32_t> i_set{static_cast<uint32_t>(rng.below(n))};
        acc.clear();
        BitVec cover(n);
        for (size_t w = 0; w < g.row_words(); ++w)
            cover.data()[w] = g.row_bits(i_set[0])[w];
        std::vector<bool> used(n, false);
        used[i_set[0]] = true;
        while (i_set.size() < l) {
            uint32_t best = n;
            size_t best_gain = n + 1;
            for (uint32_t v = 0; v < n; ++v) {
                if (used[v]) continue;
                size_t extra = 0;
                for (size_t w = 0; w < g.row_words(); ++w)
                    extra += std::popcount(g.row_bits(v)[w] & ~cover.raw()[w]);
                if (extra < best_gain) {
                    best_gain = extra;
                    best = v;
                }
            }
            used[best] = true;
            i_set.push_back(best);
            for (size_t w = 0; w < g.row_words(); ++w) cover.data()[w] |= g.row_bits(best)[w];
        }
        ++res.sets_examined;
        if (n - cover.count() >= r) {
            std::sort(i_set.begin(), i_set.end());
            res.found = true;
            res.i_set = std::move(i_set);
            acc = cover;
            res.j_set = collect_j();
            return res;
        }
    }
    return res;
}

namespace {

// Max independent set over a packed candidate mask (n <= 64).
struct MisSolver {
    uint32_t n;
    std::vector<uint64_t> adj; // symmetrized, no self bit
    uint32_t best = 0;
    uint64_t best_set = 0;

    void search(uint64_t cand, uint32_t size, uint64_t chosen) {
        if (size + static_cast<uint32_t>(std::popcount(cand)) <= best) return;
        if (!cand) {
            if (size > best) {
                best = size;
                best_set = chosen;
            }
            return;
        }
        // Branch on a max-degree vertex within the candidate set.
        uint32_t pick = 0;
        int pick_deg = -1;
        uint64_t it = cand;
        while (it) {
            uint32_t v = static_cast<uint32_t>(std::countr_zero(it));
            it &= it - 1;
            int deg = std::popcount(adj[v] & cand);
            if (deg > pick_deg) {
                pick_deg = deg;
                pick = v;
            }
        }
        uint64_t bit = 1ull << pick;
        search(cand & ~(adj[pick] | bit), size + 1, chosen | bit); // take it
        search(cand & ~bit, size, chosen);                         // skip it
    }
};

} // namespace

IndependenceResult independence_number(const Digraph& g, uint32_t exact_cap) {
    const uint32_t n = g.n();
    IndependenceResult res;
    // Candidates: loop-free vertices.
    std::vector<uint32_t> cand;
    for (uint32_t v = 0; v < n; ++v)
        if (!g.has_edge(v, v)) cand.push_back(v);
    if (cand.empty()) {
        res.exact = true;
        return res;
    }
    if (n <= exact_cap && n <= 64) {
        MisSolver solver;
        solver.n = n;
        solver.adj.assign(n, 0);
        for (uint32_t u = 0; u < n; ++u)
            for (uint32_t j : g.out_neighbors(u))
                if (u != j) {
                    solver.adj[u] |= 1ull << j;
                    solver.adj[j] |= 1ull << u;
                }
        uint64_t mask = 0;
        for (uint32_t v : cand) mask |= 1ull << v;
        solver.search(mask, 0, 0);
        res.exact = true;
        res.size = solver.best;
        for (uint32_t v = 0; v < n; ++v)
            if ((solver.best_set >> v) & 1) res.set.push_back(v);
        return res;
    }
    // Greedy on the symmetrized graph by minimum degree, then a single
    // 1-out/2-in improvement pass; lower bound only.
    std::vector<BitVec> adj(n, BitVec(n));
    for (uint32_t u = 0; u < n; ++u)
        for (uint32_t j : g.out_neighbors(u))
            if (u != j) {
                adj[u].set(j);
                adj[j].set(u);
            }
    BitVec alive = BitVec::from_list(n, cand);
    std::vector<uint32_t> chosen;
    while (alive.any()) {
        uint32_t pick = n;
        size_t pick_deg = n + 1;
        for (uint32_t v = 0; v < n; ++v) {
            if (!alive.test(v)) continue;
            size_t deg = adj[v].intersection_count(alive);
            if (deg < pick_deg) {
                pick_deg = deg;
                pick = v;
            }
        }
        chosen.push_back(pick);
        alive.reset(pick);
        alive.and_not(adj[pick]);
    }
    auto independent_with = [&](const std::vector<uint32_t>& set, uint32_t v) {
        for (uint32_t u : set)
            if (u != v && (adj[v].test(u))) return false;
        return true;
    };
    bool improved = true;
    while (improved) {
        improved = false;
        for (size_t t = 0; t < chosen.size() && !improved; ++t) {
            std::vector<uint32_t> without = chosen;
            without.erase(without.begin() + t);
            for (uint32_t v : cand) {
                if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) continue;
                if (!independent_with(without, v)) continue;
                for (uint32_t w : cand) {
                    if (w == v || std::find(chosen.begin(), chosen.end(), w) != chosen.end()) continue;
                    if (adj[v].test(w)) continue;
                    if (!independent_with(without, w)) continue;
                    without.push_back(v);
                    without.push_back(w);
                    chosen = without;
                    improved = true;
                    break;
                }
                if (improved) break;
            }
        }
    }
    std::sort(chosen.begin(), chosen.end());
    res.size = static_cast<uint32_t>(chosen.size());
    res.set = std::move(chosen);
    res.exact = false;
    return res;
}

OmegaReport omega_events(const Digraph& g, const Rat& epsilon, uint64_t j_budget, Rng& rng,
                         const Rat& c0) {
    if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("omega_events: need eps in (0,1)");
    const uint32_t n = g.n();
    const uint32_t d = g.d();
    OmegaReport rep;
    rep.epsilon = epsilon;
    // Omega^2: exact over all pairs. |supp(R_i+R_j)| = 2d - |co_out|.
    uint32_t min_union = 2 * d;
    for (uint32_t u = 0; u + 1 < n; ++u)
        for (uint32_t v = u + 1; v < n; ++v) {
            uint32_t uni = 2 * d - static_cast<uint32_t>(g.co_out_count(u, v));
            min_union = std::min(min_union, uni);
        }
    if (n == 1) min_union = d;
    rep.min_pair_union = min_union;
    rep.in_omega2 =
        Rat(static_cast<unsigned long>(min_union)) >= Rat(2) * (Rat(1) - epsilon) * Rat(static_cast<unsigned long>(d));
    // Omega_eps via the subset engine on columns (S_J = N^in(J)).
    Rat kub = c0 * epsilon * Rat(static_cast<unsigned long>(n)) / Rat(static_cast<unsigned long>(d));
    long k_max = static_cast<long>(std::floor(rat_double(kub)));
    rep.k_max = static_cast<uint32_t>(std::clamp<long>(k_max, 1, n));
    ExpansionReport er = expansion_check(g, epsilon, rep.k_max, j_budget, rng);
    rep.min_sj_ratio = er.worst_ratio;
    rep.subsets_tested = er.subsets_tested;
    rep.omega_eps_exhaustive = er.exhaustive;
    rep.in_omega_eps = er.worst_ratio >= Rat(1) - epsilon;
    return rep;
}

uint32_t row_support_density(const Digraph& g, const std::vector<uint32_t>& j_set,
                             const Rat& alpha, const Rat& beta) {
    if (alpha <= 0 || beta <= 0) throw std::invalid_argument("row_support_density: need alpha, beta > 0");
    const uint32_t n = g.n();
    if (Rat(static_cast<unsigned long>(j_set.size())) < beta * Rat(static_cast<unsigned long>(n)))
        throw std::invalid_argument("row_support_density: |J| < beta n");
    BitVec jmask = BitVec::from_list(n, j_set);
    Rat threshold = beta / (Rat(2) * alpha);
    uint32_t count = 0;
    for (uint32_t i = 0; i < n; ++i) {
        size_t hit = and_count(g.row_bits(i), jmask.raw().data(), g.row_words());
        if (Rat(static_cast<unsigned long>(hit)) >= threshold) ++count;
    }
    return count;
}

namespace {

struct VecU64Hash {
    size_t operator()(const std::vector<uint64_t>& v) const {
        size_t h = 0xcbf29ce484222325ull;
        for (uint64_t w : v) {
            h ^= static_cast<size_t>(w);
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

} // namespace

AnticoncEstimate delta_anticoncentration(uint32_t n, uint32_t d, const std::vector<uint32_t>& j_set,
                                         uint64_t n_samples, const FrozenColumnSet* frozen,
                                         const ChainConfig& cfg, Rng& rng,
                                         SampleMode mode, uint64_t stream_thinning) {
    if (j_set.empty()) throw std::invalid_argument("delta_anticoncentration: empty J");
    if (n_samples < 2) throw std::invalid_argument("delta_anticoncentration: need N >= 2");
    AnticoncEstimate est;
    est.j_set = j_set;
    est.samples = n_samples;
    est.mode = mode;
    est.frozen_present = frozen != nullptr && !frozen->empty();
    if (est.frozen_present) {
        BitVec fmask = BitVec::from_list(n, frozen->cols);
        for (uint32_t j : j_set)
            if (fmask.test(j))
                throw std::invalid_argument("delta_anticoncentration: J intersects frozen columns");
        est.conditional_heuristic = true;
        uint64_t isz = frozen->cols.size();
        est.regime_flag_I = Rat(static_cast<unsigned long>(isz)) <=
                            Rat(static_cast<unsigned long>(d) * static_cast<unsigned long>(j_set.size()), 32);
    }
    est.regime_flag_J = j_set.size() >= 8 &&
                        Rat(static_cast<unsigned long>(j_set.size())) <=
                            Rat(8ul * static_cast<unsigned long>(n), static_cast<unsigned long>(d));

    std::unordered_map<std::vector<uint64_t>, uint64_t, VecU64Hash> counts;
    counts.reserve(n_samples * 2);
    const size_t words = (n + 63) / 64;
    if (mode == SampleMode::independent) {
        for (uint64_t idx = 0; idx < n_samples; ++idx) {
            Rng r = rng.derive(idx);
            Digraph g = est.frozen_present ? sample_conditional(n, d, *frozen, cfg, r)
                                           : sample_auto(n, d, cfg, r);
            BitVec delta = g.n_in_bits(j_set);
            ++counts[delta.raw()];
        }
    } else {
        est.thinning = stream_thinning ? stream_thinning : std::max<uint64_t>(1, n / 4);
        Rng chain_rng = rng.derive(0x57ull);
        std::optional<SwitchChain> chain;
        if (est.frozen_present) chain.emplace(n, d, *frozen, chain_rng);
        else chain.emplace(n, d, chain_rng);
        chain->run(std::max(cfg.burn_in_steps, default_burn_in(n, d)));
        std::vector<uint64_t> delta(words);
        for (uint64_t idx = 0; idx < n_samples; ++idx) {
            chain->run(est.thinning);
            chain->delta_words(j_set, delta);
            ++counts[delta];
        }
    }
    std::vector<uint64_t> cvec;
    cvec.reserve(counts.size());
    for (const auto& [k, c] : counts) cvec.push_back(c);
    CollisionEstimate ce = collision_estimate(cvec, n_samples);
    est.max_atom_hat = ce.max_atom_hat;
    est.collision_hat = ce.collision_hat;
    est.sigma = ce.sigma;
    est.distinct = ce.distinct;
    return est;
}

ProjectionEstimate projection_anticoncentration(uint32_t n, uint32_t d, const ProjectionParams& params,
                                                uint64_t n_samples, const ChainConfig& cfg, Rng& rng) {
    // Partition sanity.
    std::vector<int> owner(n, -1);
    auto mark = [&](const std::vector<uint32_t>& set, int id, const char* name) {
        for (uint32_t v : set) {
            if (v >= n) throw std::invalid_argument(std::string("projection: index out of range in ") + name);
            if (owner[v] != -1) throw std::invalid_argument(std::string("projection: sets overlap at ") + name);
            owner[v] = id;
        }
    };
    mark(params.i_set, 0, "I");
    mark(params.j_set, 1, "J");
    mark(params.j_lambda, 2, "J_lambda");
    for (uint32_t v = 0; v < n; ++v)
        if (owner[v] == -1)
            throw std::invalid_argument("projection: I, J, J_lambda must partition [n]");
    if (params.y.size() != n) throw std::invalid_argument("projection: y has wrong length");
    if (params.a <= 0) throw std::invalid_argument("projection: a must be positive");
    Rat lambda(0);
    if (!params.j_lambda.empty()) {
        lambda = params.y[params.j_lambda[0]];
        for (uint32_t v : params.j_lambda)
            if (params.y[v] != lambda)
                throw std::invalid_argument("projection: hypothesis violated: y not constant on J_lambda");
    }
    for (uint32_t v : params.j_set)
        if (params.y[v] - lambda < Rat(2) * params.a)
            throw std::invalid_argument("projection: hypothesis violated: y_j - lambda < 2a on J");
    for (uint32_t v : params.s_set)
        if (v >= n) throw std::invalid_argument("projection: S index out of range");

    ProjectionEstimate est;
    est.samples = n_samples;
    double dj = static_cast<double>(d) * static_cast<double>(params.j_set.size());
    if (dj > 0 && dj < n) est.exponent_shape = std::exp(-dj * std::log(static_cast<double>(n) / dj));
    for (uint64_t idx = 0; idx < n_samples; ++idx) {
        Rng r = rng.derive(idx);
        Digraph g = sample_auto(n, d, cfg, r);
        bool event = true;
        for (uint32_t i : params.s_set) {
            Rat row_sum(0);
            for (uint32_t j : g.out_neighbors(i)) row_sum += params.y[j];
            if (abs(row_sum) >= params.a) {
                event = false;
                break;
            }
        }
        if (event) ++est.hits;
    }
    est.frequency = n_samples ? static_cast<double>(est.hits) / static_cast<double>(n_samples) : 0.0;
    est.wilson = wilson_interval(est.hits, n_samples);
    return est;
}

} // namespace rrd
