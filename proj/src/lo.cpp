#include "rrd/lo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "rrd/rank.hpp"

namespace rrd {

namespace {

// Subset sums of one half, bucketed by subset size: size -> (sum -> count).
using HalfTable = std::vector<std::unordered_map<Rat, Int, RatHash>>;

HalfTable half_sums(const std::vector<Rat>& vals) {
    const uint32_t h = static_cast<uint32_t>(vals.size());
    HalfTable table(h + 1);
    std::vector<Rat> sum(1ull << h);
    sum[0] = 0;
    ++table[0][Rat(0)];
    for (uint64_t mask = 1; mask < (1ull << h); ++mask) {
        uint64_t low = mask & (mask - 1);
        uint32_t bit = static_cast<uint32_t>(std::countr_zero(mask));
        sum[mask] = sum[low] + vals[bit];
        ++table[static_cast<uint32_t>(std::popcount(mask))][sum[mask]];
    }
    return table;
}

void check_mitm_size(size_t m) {
    if (m > 40)
        throw std::invalid_argument("subset-sum counting: ground set of size " + std::to_string(m) +
                                    " exceeds the exact cap of 40");
}

} // namespace

Int count_subsets_with_sum(const std::vector<Rat>& values, uint32_t t, const Rat& target) {
    const size_t m = values.size();
    if (t > m) return 0;
    check_mitm_size(m);
    const uint32_t h1 = static_cast<uint32_t>(m / 2);
    std::vector<Rat> left(values.begin(), values.begin() + h1);
    std::vector<Rat> right(values.begin() + h1, values.end());
    HalfTable lt = half_sums(left), rt = half_sums(right);
    Int total = 0;
    for (uint32_t s = 0; s <= t && s < lt.size(); ++s) {
        uint32_t need = t - s;
        if (need >= rt.size()) continue;
        const auto& rhs = rt[need];
        if (rhs.empty() || lt[s].empty()) continue;
        for (const auto& [sum, cnt] : lt[s]) {
            auto it = rhs.find(target - sum);
            if (it != rhs.end()) total += cnt * it->second;
        }
    }
    return total;
}

std::map<Rat, Int> subset_sum_distribution(const std::vector<Rat>& values, uint32_t t,
                                           uint64_t pair_guard) {
    const size_t m = values.size();
    if (t > m) return {};
    check_mitm_size(m);
    const uint32_t h1 = static_cast<uint32_t>(m / 2);
    std::vector<Rat> left(values.begin(), values.begin() + h1);
    std::vector<Rat> right(values.begin() + h1, values.end());
    HalfTable lt = half_sums(left), rt = half_sums(right);
    uint64_t work = 0;
    for (uint32_t s = 0; s <= t && s < lt.size(); ++s) {
        uint32_t need = t - s;
        if (need >= rt.size()) continue;
        work += static_cast<uint64_t>(lt[s].size()) * rt[need].size();
    }
    if (work > pair_guard)
        throw std::invalid_argument("subset_sum_distribution: table product " + std::to_string(work) +
                                    " exceeds guard; query single targets instead");
    std::map<Rat, Int> dist;
    for (uint32_t s = 0; s <= t && s < lt.size(); ++s) {
        uint32_t need = t - s;
        if (need >= rt.size()) continue;
        for (const auto& [ls, lc] : lt[s])
            for (const auto& [rs, rc] : rt[need]) dist[ls + rs] += lc * rc;
    }
    return dist;
}

Rat atom_probability(const SubsetSumAtomQuery& q) {
    const size_t m = q.v.size();
    if (m == 0 || m % 2 != 0) throw std::invalid_argument("atom_probability: v must have length 2d");
    const uint32_t d = static_cast<uint32_t>(m / 2);
    if (m > 32)
        throw std::invalid_argument("atom_probability: 2d > 32; use Monte Carlo sampling instead");
    if (q.k < 1 || q.k > d) throw std::invalid_argument("atom_probability: need 1 <= k <= d");
    // A separating J of size k must be a union of complete value classes.
    std::map<Rat, uint32_t> classes;
    for (const Rat& x : q.v) ++classes[x];
    std::vector<bool> reachable(m + 1, false);
    reachable[0] = true;
    for (const auto& [val, c] : classes)
        for (uint32_t s = static_cast<uint32_t>(m); s >= c; --s)
            if (reachable[s - c]) reachable[s] = true;
    if (!reachable[q.k])
        throw std::invalid_argument("atom_probability: no J of size k separates the values of v");
    Int hits = count_subsets_with_sum(q.v, d, q.a);
    Rat prob(hits, binomial(m, d));
    prob.canonicalize();
    return prob;
}

Rat max_atom(const std::vector<Rat>& v) {
    const size_t m = v.size();
    if (m == 0 || m % 2 != 0) throw std::invalid_argument("max_atom: v must have length 2d");
    const uint32_t d = static_cast<uint32_t>(m / 2);
    auto dist = subset_sum_distribution(v, d);
    Int best = 0;
    for (const auto& [sum, cnt] : dist) best = std::max(best, cnt);
    Rat atom(best, binomial(m, d));
    atom.canonicalize();
    return atom;
}

Rat erdos_lo_max_atom(const std::vector<Rat>& x, const std::vector<std::pair<Rat, Rat>>* xi,
                      uint32_t cap, uint64_t support_guard) {
    const size_t m = x.size();
    if (m == 0) throw std::invalid_argument("erdos_lo_max_atom: empty vector");
    bool any_nonzero = false;
    for (const Rat& v : x)
        if (v != 0) { any_nonzero = true; break; }
    if (!any_nonzero) throw std::invalid_argument("erdos_lo_max_atom: zero vector (empty support)");
    if (m > cap) throw std::invalid_argument("erdos_lo_max_atom: m exceeds exact cap");
    if (xi && xi->size() != m) throw std::invalid_argument("erdos_lo_max_atom: xi size mismatch");
    for (size_t i = 0; xi && i < m; ++i)
        if ((*xi)[i].first == (*xi)[i].second)
            throw std::invalid_argument("erdos_lo_max_atom: xi must be two-valued");
    // Distribution table over exact sums; mass stored as path counts / 2^m.
    std::unordered_map<Rat, Int, RatHash> dist;
    dist[Rat(0)] = 1;
    for (size_t i = 0; i < m; ++i) {
        Rat lo = xi ? (*xi)[i].first : Rat(-1);
        Rat hi = xi ? (*xi)[i].second : Rat(1);
        std::unordered_map<Rat, Int, RatHash> next;
        next.reserve(dist.size() * 2);
        for (const auto& [sum, cnt] : dist) {
            next[sum + lo * x[i]] += cnt;
            next[sum + hi * x[i]] += cnt;
        }
        if (next.size() > support_guard)
            throw std::invalid_argument("erdos_lo_max_atom: distribution support exceeds guard");
        dist = std::move(next);
    }
    Int best = 0;
    for (const auto& [sum, cnt] : dist) best = std::max(best, cnt);
    Int denom = 1;
    denom <<= m;
    Rat atom(best, denom);
    atom.canonicalize();
    return atom;
}

PermPairEstimate permutation_pair_estimate(uint32_t k, uint32_t d, uint64_t n_samples, Rng& rng) {
    if (k < 1 || k > d) throw std::invalid_argument("permutation_pair_estimate: need 1 <= k <= d");
    PermPairEstimate est;
    est.k = k;
    est.d = d;
    est.n_samples = n_samples;
    const uint32_t m = 2 * d;
    std::vector<uint32_t> perm(m);
    for (uint64_t t = 0; t < n_samples; ++t) {
        std::iota(perm.begin(), perm.end(), 0u);
        for (uint32_t u = m; u > 1; --u) std::swap(perm[u - 1], perm[rng.below(u)]);
        uint32_t mismatches = 0;
        for (uint32_t i = 0; i < d; ++i) {
            bool a = perm[i] < k, b = perm[i + d] < k; // canonical x: 1 on the first k slots
            mismatches += (a != b) ? 1 : 0;
        }
        if (50ull * mismatches <= k) ++est.hits;
    }
    est.frequency = n_samples ? static_cast<double>(est.hits) / static_cast<double>(n_samples) : 0.0;
    est.wilson = wilson_interval(est.hits, n_samples);
    est.reference_bound = std::pow(static_cast<double>(k) / (1.1 * d), static_cast<double>(k) / 3.0);
    return est;
}

const char* shuffle_outcome_name(ShuffleOutcome o) {
    switch (o) {
        case ShuffleOutcome::ok: return "ok";
        case ShuffleOutcome::not_witnessed: return "not_witnessed";
        case ShuffleOutcome::class_too_large: return "class_too_large";
    }
    return "unknown";
}

namespace {

// Count of non-modal coordinates of v restricted to the index set.
uint32_t separation_score(const std::vector<Int>& v, const std::vector<uint32_t>& support) {
    std::map<Int, uint32_t> mult;
    for (uint32_t i : support) ++mult[v[i]];
    uint32_t max_mult = 0;
    for (const auto& [val, c] : mult) max_mult = std::max(max_mult, c);
    return static_cast<uint32_t>(support.size()) - max_mult;
}

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

} // namespace

ShuffleClassReport shuffle_class_experiment(const Digraph& g, uint32_t q, const Rat& epsilon,
                                            Rng& rng, uint32_t i1, uint32_t i2,
                                            uint32_t combo_budget) {
    const uint32_t n = g.n(), d = g.d();
    if (i1 == i2 || i1 >= n || i2 >= n)
        throw std::invalid_argument("shuffle_class_experiment: bad row pair");
    if (epsilon <= 0 || epsilon >= 1)
        throw std::invalid_argument("shuffle_class_experiment: need eps in (0,1)");
    ShuffleClassReport rep;
    rep.q = q;
    rep.epsilon = epsilon;

    uint32_t min_union = 2 * d;
    for (uint32_t u = 0; u + 1 < n; ++u)
        for (uint32_t v = u + 1; v < n; ++v)
            min_union = std::min(min_union, 2 * d - static_cast<uint32_t>(g.co_out_count(u, v)));
    rep.min_pair_union = min_union;
    rep.in_omega2 = Rat(static_cast<unsigned long>(min_union)) >=
                    Rat(2) * (Rat(1) - epsilon) * Rat(static_cast<unsigned long>(d));

    // Shared/union supports of the chosen pair.
    std::vector<uint32_t> s12, u12;
    for (uint32_t v = 0; v < n; ++v) {
        bool a = g.has_edge(i1, v), b = g.has_edge(i2, v);
        if (a && b) s12.push_back(v);
        if (a || b) u12.push_back(v);
    }
    rep.m1 = static_cast<uint32_t>(u12.size());
    rep.m2 = static_cast<uint32_t>(s12.size());
    std::vector<uint32_t> s_free;
    for (uint32_t v : u12)
        if (!std::binary_search(s12.begin(), s12.end(), v)) s_free.push_back(v);
    const uint32_t t = d - rep.m2; // row-1 support slots inside S
    rep.class_size = binomial(s_free.size(), t);

    if (s_free.size() > 40) {
        rep.outcome = ShuffleOutcome::class_too_large;
        return rep;
    }

    // Orthogonal complement of span{rows != i1,i2, R_{i1}+R_{i2}}.
    IntMatrix a_mat;
    a_mat.reserve(n - 1);
    for (uint32_t i = 0; i < n; ++i) {
        if (i == i1 || i == i2) continue;
        std::vector<Int> row(n, 0);
        for (uint32_t j : g.out_neighbors(i)) row[j] = 1;
        a_mat.push_back(std::move(row));
    }
    std::vector<Int> sum_row(n, 0);
    for (uint32_t j : g.out_neighbors(i1)) sum_row[j] += 1;
    for (uint32_t j : g.out_neighbors(i2)) sum_row[j] += 1;
    a_mat.push_back(std::move(sum_row));
    auto basis = kernel_basis(a_mat);

    std::vector<Int> best_v;
    uint32_t best_score = 0;
    auto consider = [&](std::vector<Int> cand) {
        bool nonzero = false;
        for (const Int& x : cand)
            if (x != 0) { nonzero = true; break; }
        if (!nonzero) return;
        canonicalize_int_vector(cand);
        uint32_t score = separation_score(cand, u12);
        if (best_v.empty() || score > best_score ||
            (score == best_score && lex_less(cand, best_v))) {
            best_score = score;
            best_v = std::move(cand);
        }
    };
    for (const auto& b : basis) consider(b);
    if (!basis.empty()) {
        const size_t dim = basis.size();
        std::vector<Int> combo(n);
        for (uint32_t iter = 0; iter < combo_budget; ++iter) {
            std::fill(combo.begin(), combo.end(), 0);
            for (size_t b = 0; b < dim; ++b) {
                long c = rng.range(-5, 5);
                if (c == 0) continue;
                for (uint32_t j = 0; j < n; ++j) combo[j] += c * basis[b][j];
            }
            consider(combo);
        }
    }
    rep.q_witnessed = best_score;
    rep.pair_overlap_ok = Rat(static_cast<unsigned long>(rep.m2)) <=
                          Rat(2) * epsilon * Rat(static_cast<unsigned long>(d));
    if (best_score < q || best_v.empty()) {
        rep.outcome = ShuffleOutcome::not_witnessed;
        return rep;
    }
    rep.v = best_v;

    Rat a_target(0);
    for (uint32_t i : s12) a_target -= Rat(best_v[i]);
    rep.target = a_target;
    std::vector<Rat> vals;
    vals.reserve(s_free.size());
    for (uint32_t i : s_free) vals.emplace_back(best_v[i]);
    rep.zero_count = count_subsets_with_sum(vals, t, a_target);
    rep.zero_fraction = Rat(rep.zero_count, rep.class_size);
    rep.zero_fraction.canonicalize();

    // Bound is defined only when q > 2 eps d.
    Rat margin = Rat(static_cast<unsigned long>(q)) -
                 Rat(2) * epsilon * Rat(static_cast<unsigned long>(d));
    if (margin > 0) {
        rep.bound = 10.0 / std::sqrt(rat_double(margin));
        // zero_fraction <= 10 / sqrt(margin)  <=>  zf^2 * margin <= 100
        rep.bound_holds = rep.zero_fraction * rep.zero_fraction * margin <= Rat(100);
    }
    return rep;
}

ShuffleClassReport shuffle_class_auto(const Digraph& g, Rng& rng, uint32_t i1, uint32_t i2,
                                      uint32_t combo_budget) {
    const uint32_t d = g.d();
    // Probe pass: find the best witnessed separation with a permissive eps.
    Rng probe_rng = rng.derive(0xabcdull);
    ShuffleClassReport probe =
        shuffle_class_experiment(g, 0, Rat(1, 2), probe_rng, i1, i2, combo_budget);
    if (probe.outcome == ShuffleOutcome::class_too_large) return probe;
    uint32_t q = std::min<uint32_t>(probe.q_witnessed, (2 * d) / 3);
    if (q == 0) {
        probe.outcome = ShuffleOutcome::not_witnessed;
        return probe;
    }
    Rat eps(static_cast<unsigned long>(q), 4ul * d);
    eps.canonicalize();
    Rng run_rng = rng.derive(0xabcdull); // same stream: identical combo draws
    return shuffle_class_experiment(g, q, eps, run_rng, i1, i2, combo_budget);
}

} // namespace rrd
