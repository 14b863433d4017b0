#include "rrd/rank.hpp"

#include <algorithm>
#include <functional>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rrd/rng.hpp"

namespace rrd {

IntMatrix to_matrix(const Digraph& g) {
    IntMatrix m(g.n(), std::vector<Int>(g.n(), 0));
    for (uint32_t i = 0; i < g.n(); ++i)
        for (uint32_t j : g.out_neighbors(i)) m[i][j] = 1;
    return m;
}

IntMatrix transpose(const IntMatrix& m) {
    if (m.empty()) return {};
    IntMatrix t(m[0].size(), std::vector<Int>(m.size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

namespace {

uint32_t rank_mod_p_impl(const IntMatrix& m, uint64_t p, std::vector<uint32_t>* pivot_rows) {
    const size_t rows = m.size();
    const size_t cols = rows ? m[0].size() : 0;
    std::vector<std::vector<uint64_t>> a(rows, std::vector<uint64_t>(cols));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) {
            Int r = m[i][j] % static_cast<unsigned long>(p);
            if (r < 0) r += static_cast<unsigned long>(p);
            a[i][j] = r.get_ui();
        }
    auto inv_mod = [p](uint64_t x) {
        // p is prime: Fermat inverse.
        uint64_t e = p - 2, r = 1;
        while (e) {
            if (e & 1) r = (unsigned __int128)(r)*x % p;
            x = (unsigned __int128)(x)*x % p;
            e >>= 1;
        }
        return r;
    };
    uint32_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t piv = rows;
        for (size_t i = rank; i < rows; ++i)
            if (a[i][col] != 0) { piv = i; break; }
        if (piv == rows) continue;
        std::swap(a[rank], a[piv]);
        if (pivot_rows) pivot_rows->push_back(static_cast<uint32_t>(piv));
        uint64_t inv = inv_mod(a[rank][col]);
        for (size_t i = rank + 1; i < rows; ++i) {
            if (a[i][col] == 0) continue;
            uint64_t f = (unsigned __int128)(a[i][col]) * inv % p;
            for (size_t j = col; j < cols; ++j) {
                uint64_t sub = (unsigned __int128)(f)*a[rank][j] % p;
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
        ++rank;
    }
    return rank;
}

struct Echelon {
    IntMatrix a;                      // fraction-free row echelon form
    std::vector<size_t> pivot_cols;   // one per echelon row
    uint32_t rank = 0;
};

// Bareiss fraction-free elimination; works for rectangular matrices.
Echelon bareiss(const IntMatrix& m) {
    Echelon e;
    e.a = m;
    const size_t rows = e.a.size();
    const size_t cols = rows ? e.a[0].size() : 0;
    Int prev = 1;
    size_t r = 0;
    for (size_t col = 0; col < cols && r < rows; ++col) {
        // Smallest-magnitude nonzero pivot keeps intermediate entries short.
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i) {
            if (e.a[i][col] == 0) continue;
            if (piv == rows || mpz_cmpabs(e.a[i][col].get_mpz_t(), e.a[piv][col].get_mpz_t()) < 0) piv = i;
        }
        if (piv == rows) continue;
        std::swap(e.a[r], e.a[piv]);
        for (size_t i = r + 1; i < rows; ++i) {
            for (size_t j = col + 1; j < cols; ++j) {
                Int v = e.a[r][col] * e.a[i][j] - e.a[i][col] * e.a[r][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                e.a[i][j] = std::move(v);
            }
            e.a[i][col] = 0;
        }
        prev = e.a[r][col];
        e.pivot_cols.push_back(col);
        ++r;
    }
    e.rank = static_cast<uint32_t>(r);
    return e;
}

std::vector<Int> kernel_vector_for_free_col(const Echelon& e, size_t cols, size_t free_col) {
    // Back-substitute over Q with x[free_col] = 1, other free columns 0.
    std::vector<Rat> x(cols, Rat(0));
    x[free_col] = 1;
    for (size_t t = e.pivot_cols.size(); t-- > 0;) {
        size_t pc = e.pivot_cols[t];
        Rat acc(0);
        for (size_t j = pc + 1; j < cols; ++j) {
            if (x[j] != 0 && e.a[t][j] != 0) acc += Rat(e.a[t][j]) * x[j];
        }
        x[pc] = -acc / Rat(e.a[t][pc]);
    }
    return clear_denominators(x);
}

} // namespace

uint32_t rank_mod_p(const IntMatrix& m, uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("rank_mod_p: modulus is not prime");
    return rank_mod_p_impl(m, p, nullptr);
}

uint32_t exact_rank(const IntMatrix& m) { return bareiss(m).rank; }

std::vector<std::vector<Int>> kernel_basis(const IntMatrix& m) {
    if (m.empty()) return {};
    const size_t cols = m[0].size();
    Echelon e = bareiss(m);
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : e.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Int>> basis;
    for (size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) basis.push_back(kernel_vector_for_free_col(e, cols, c));
    return basis;
}

namespace {

// Three word-size primes per matrix, derived deterministically from the
// matrix content so certificates replay bit-identically.
std::vector<uint64_t> witness_primes(const IntMatrix& m) {
    size_t h = 0xcbf29ce484222325ull;
    for (const auto& row : m)
        for (const Int& v : row) {
            h ^= hash_int(v);
            h *= 0x100000001b3ull;
        }
    Rng rng(static_cast<uint64_t>(h));
    std::vector<uint64_t> ps;
    while (ps.size() < 3) {
        uint64_t cand = next_prime_from((1ull << 30) + rng.below(1ull << 30));
        if (std::find(ps.begin(), ps.end(), cand) == ps.end()) ps.push_back(cand);
    }
    return ps;
}

bool is_zero_vec(const std::vector<Int>& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

std::vector<Int> mat_vec(const IntMatrix& m, const std::vector<Int>& x) {
    std::vector<Int> y(m.size(), 0);
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
            if (m[i][j] != 0 && x[j] != 0) y[i] += m[i][j] * x[j];
    return y;
}

std::vector<Int> vec_mat(const std::vector<Int>& y, const IntMatrix& m) {
    std::vector<Int> x(m.empty() ? 0 : m[0].size(), 0);
    for (size_t i = 0; i < m.size(); ++i)
        if (y[i] != 0)
            for (size_t j = 0; j < x.size(); ++j)
                if (m[i][j] != 0) x[j] += y[i] * m[i][j];
    return x;
}

} // namespace

RankCertificate is_singular(const IntMatrix& m) {
    const size_t n = m.size();
    if (n == 0 || m[0].size() != n) throw std::invalid_argument("is_singular: matrix must be square");
    // Constant margins are expected but not required.
    Int row0 = 0, col0 = 0;
    for (size_t j = 0; j < n; ++j) row0 += m[0][j];
    for (size_t i = 0; i < n; ++i) col0 += m[i][0];
    bool regular = true;
    for (size_t i = 0; i < n && regular; ++i) {
        Int rs = 0, cs = 0;
        for (size_t j = 0; j < n; ++j) {
            rs += m[i][j];
            cs += m[j][i];
        }
        regular = rs == row0 && cs == col0;
    }
    if (!regular)
        std::fprintf(stderr, "is_singular: warning: matrix does not have constant row/column sums\n");
    RankCertificate cert;
    for (uint64_t p : witness_primes(m)) {
        std::vector<uint32_t> pivots;
        uint32_t r = rank_mod_p_impl(m, p, &pivots);
        if (r == n) {
            cert.rank = r;
            cert.singular = false;
            cert.witness_kind = WitnessKind::full_rank_mod_p;
            cert.prime = p;
            cert.pivot_rows = std::move(pivots);
            return cert;
        }
    }
    // All modular ranks deficient: confirm exactly and extract null vectors.
    cert.rank = exact_rank(m);
    if (cert.rank == n) {
        // Unlucky primes; fall back to a full-rank witness by scanning odd primes.
        uint64_t p = (1ull << 30) + 1;
        for (;;) {
            p = next_prime_from(p + 1);
            std::vector<uint32_t> pivots;
            if (rank_mod_p_impl(m, p, &pivots) == n) {
                cert.singular = false;
                cert.witness_kind = WitnessKind::full_rank_mod_p;
                cert.prime = p;
                cert.pivot_rows = std::move(pivots);
                return cert;
            }
        }
    }
    cert.singular = true;
    cert.witness_kind = WitnessKind::kernel_vectors;
    cert.null_right = kernel_basis(m).front();
    cert.null_left = kernel_basis(transpose(m)).front();
    return cert;
}

RankCertificate is_singular(const Digraph& g) { return is_singular(to_matrix(g)); }

bool RankCertificate::verify(const IntMatrix& m) const {
    const size_t n = m.size();
    if (!singular) {
        if (witness_kind != WitnessKind::full_rank_mod_p || rank != n) return false;
        return rank_mod_p_impl(m, prime, nullptr) == n;
    }
    if (witness_kind != WitnessKind::kernel_vectors || rank >= n) return false;
    if (null_right.size() != n || null_left.size() != n) return false;
    if (is_zero_vec(null_right) || is_zero_vec(null_left)) return false;
    return is_zero_vec(mat_vec(m, null_right)) && is_zero_vec(vec_mat(null_left, m));
}

std::string RankCertificate::to_json() const {
    std::ostringstream os;
    os << "{\"rank\":" << rank << ",\"singular\":" << (singular ? "true" : "false")
       << ",\"witness_kind\":\""
       << (witness_kind == WitnessKind::full_rank_mod_p ? "full_rank_mod_p" : "kernel_vectors") << "\"";
    if (!singular) {
        os << ",\"prime\":" << prime << ",\"pivot_rows\":[";
        for (size_t i = 0; i < pivot_rows.size(); ++i) os << (i ? "," : "") << pivot_rows[i];
        os << "]";
    } else {
        auto emit = [&os](const char* key, const std::vector<Int>& v) {
            os << ",\"" << key << "\":[";
            for (size_t i = 0; i < v.size(); ++i)
                os << (i ? "," : "") << '"' << v[i].get_str() << '"';
            os << "]";
        };
        emit("null_right", null_right);
        emit("null_left", null_left);
    }
    os << "}";
    return os.str();
}

namespace {

AcReport ac_check_impl(const std::vector<Rat>& x, const Rat& p) {
    if (p <= 0 || p >= Rat(1, 2)) throw std::invalid_argument("ac_check: need 0 < p < 1/2");
    bool all_zero = true;
    for (const Rat& v : x)
        if (v != 0) { all_zero = false; break; }
    if (x.empty() || all_zero) throw std::invalid_argument("ac_check: zero vector");
    std::map<Rat, uint64_t> mult;
    for (const Rat& v : x) ++mult[v];
    Rat best_val = x[0];
    uint64_t best = 0;
    for (const auto& [val, c] : mult)
        if (c > best) { best = c; best_val = val; }
    AcReport rep;
    rep.p = p;
    rep.match_count = best;
    // match_count >= (1-p) n, exactly.
    Rat threshold = (Rat(1) - p) * Rat(static_cast<unsigned long>(x.size()));
    rep.is_almost_constant = Rat(static_cast<unsigned long>(best)) >= threshold;
    if (rep.is_almost_constant) rep.lambda = best_val;
    return rep;
}

} // namespace

AcReport ac_check(const std::vector<Rat>& x, const Rat& p) { return ac_check_impl(x, p); }

AcReport ac_check(const std::vector<Int>& x, const Rat& p) {
    std::vector<Rat> q;
    q.reserve(x.size());
    for (const Int& v : x) q.emplace_back(v);
    return ac_check_impl(q, p);
}

const char* eac_verdict_name(EacVerdict v) {
    switch (v) {
        case EacVerdict::certified_true: return "certified_true";
        case EacVerdict::certified_false: return "certified_false";
        case EacVerdict::heuristic_true: return "heuristic_true";
    }
    return "unknown";
}

namespace {

bool combo_is_ac(const std::vector<std::vector<Int>>& basis, const std::vector<long>& coeffs,
                 const Rat& p, std::vector<Int>* found) {
    const size_t n = basis[0].size();
    std::vector<Int> v(n, 0);
    bool nonzero = false;
    for (size_t b = 0; b < basis.size(); ++b) {
        if (coeffs[b] == 0) continue;
        for (size_t i = 0; i < n; ++i) v[i] += coeffs[b] * basis[b][i];
    }
    for (const Int& x : v)
        if (x != 0) { nonzero = true; break; }
    if (!nonzero) return false;
    if (ac_check(v, p).is_almost_constant) {
        if (found) *found = std::move(v);
        return true;
    }
    return false;
}

// Search one kernel for a vector in AC(p). Returns certified_false evidence,
// or whether the search was exhaustive enough to certify absence (dim <= 1).
struct KernelScan {
    bool found_ac = false;
    bool certified = false;
    uint64_t combos = 0;
    std::vector<Int> witness;
};

KernelScan scan_kernel(const std::vector<std::vector<Int>>& basis, const Rat& p,
                       uint64_t random_budget, Rng& rng) {
    KernelScan s;
    if (basis.empty()) {
        s.certified = true;
        return s;
    }
    const size_t dim = basis.size();
    if (dim == 1) {
        // ac_check is scale-invariant, so one generator decides the line.
        ++s.combos;
        if (ac_check(basis[0], p).is_almost_constant) {
            s.found_ac = true;
            s.witness = basis[0];
        }
        s.certified = true;
        return s;
    }
    // Dimension >= 2: exhaust coefficients in [-3,3]^dim when that stays
    // within the random budget, otherwise deterministic probes plus random
    // combinations with entries in [-3,3].
    std::vector<long> coeffs(dim, 0);
    uint64_t exhaustive_size = 1;
    for (size_t i = 0; i < dim && exhaustive_size <= 2500; ++i) exhaustive_size *= 7;
    if (exhaustive_size <= 2500) {
        std::function<bool(size_t)> rec = [&](size_t i) -> bool {
            if (i == dim) {
                ++s.combos;
                return combo_is_ac(basis, coeffs, p, &s.witness);
            }
            for (long c = -3; c <= 3; ++c) {
                coeffs[i] = c;
                if (rec(i + 1)) return true;
            }
            return false;
        };
        s.found_ac = rec(0);
        return s; // exhaustive over the budget box, but not a certificate
    }
    // Deterministic probes: generators, all-ones combination, pairwise sums
    // and differences.
    auto probe = [&](const std::vector<long>& c) {
        ++s.combos;
        return combo_is_ac(basis, c, p, &s.witness);
    };
    std::vector<long> c(dim, 0);
    for (size_t b = 0; b < dim; ++b) {
        std::fill(c.begin(), c.end(), 0);
        c[b] = 1;
        if (probe(c)) { s.found_ac = true; return s; }
    }
    std::fill(c.begin(), c.end(), 1);
    if (probe(c)) { s.found_ac = true; return s; }
    for (size_t a = 0; a < dim; ++a)
        for (size_t b = a + 1; b < dim; ++b)
            for (long sign : {1L, -1L}) {
                std::fill(c.begin(), c.end(), 0);
                c[a] = 1;
                c[b] = sign;
                if (probe(c)) { s.found_ac = true; return s; }
            }
    for (uint64_t t = 0; t < random_budget; ++t) {
        for (size_t b = 0; b < dim; ++b) c[b] = rng.range(-3, 3);
        if (probe(c)) { s.found_ac = true; return s; }
    }
    return s;
}

} // namespace

EacReport eac_event(const IntMatrix& m, const Rat& p, uint64_t random_budget) {
    if (p <= 0 || p >= Rat(1, 2)) throw std::invalid_argument("eac_event: need 0 < p < 1/2");
    EacReport rep;
    // Modular full-rank witness settles the event without exact elimination.
    if (!m.empty() && m.size() == m[0].size()) {
        for (uint64_t q : witness_primes(m)) {
            if (rank_mod_p_impl(m, q, nullptr) == m.size()) {
                rep.verdict = EacVerdict::certified_true;
                return rep;
            }
        }
    }
    auto right = kernel_basis(m);
    auto left = kernel_basis(transpose(m));
    rep.right_dim = static_cast<uint32_t>(right.size());
    rep.left_dim = static_cast<uint32_t>(left.size());
    size_t h = 0xcbf29ce484222325ull;
    for (const auto& row : m)
        for (const Int& v : row) {
            h ^= hash_int(v);
            h *= 0x100000001b3ull;
        }
    Rng rng(static_cast<uint64_t>(h) ^ 0xeacull);
    bool all_certified = true;
    for (const auto* basis : {&right, &left}) {
        KernelScan s = scan_kernel(*basis, p, random_budget, rng);
        rep.combos_tested += s.combos;
        if (s.found_ac) {
            rep.verdict = EacVerdict::certified_false;
            rep.witness = std::move(s.witness);
            rep.witness_is_left = (basis == &left);
            return rep;
        }
        all_certified = all_certified && s.certified;
    }
    rep.verdict = all_certified ? EacVerdict::certified_true : EacVerdict::heuristic_true;
    return rep;
}

EacReport eac_event(const Digraph& g, const Rat& p, uint64_t random_budget) {
    return eac_event(to_matrix(g), p, random_budget);
}

} // namespace rrd
