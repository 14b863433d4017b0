#include "rrd/exact.hpp"

#include <stdexcept>

namespace rrd {

Int binomial(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rat rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        Int num(digits, 10);
        Int den = 1;
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    Rat q(s);
    q.canonicalize();
    if (sgn(q.get_den()) <= 0) throw std::invalid_argument("non-positive denominator: " + s);
    return q;
}

std::string rat_str(const Rat& q) { return q.get_str(); }
std::string int_str(const Int& z) { return z.get_str(); }

static uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

static uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

uint64_t next_prime_from(uint64_t lo) {
    if (lo <= 2) return 2;
    uint64_t n = lo | 1;
    while (!is_prime_u64(n)) n += 2;
    return n;
}

size_t hash_int(const Int& z) {
    size_t h = 0xcbf29ce484222325ull;
    const size_t limbs = mpz_size(z.get_mpz_t());
    for (size_t i = 0; i < limbs; ++i) {
        h ^= static_cast<size_t>(mpz_getlimbn(z.get_mpz_t(), i));
        h *= 0x100000001b3ull;
    }
    h ^= static_cast<size_t>(sgn(z) + 2);
    h *= 0x100000001b3ull;
    return h;
}

size_t hash_rat(const Rat& q) {
    size_t h = hash_int(Int(q.get_num()));
    h ^= hash_int(Int(q.get_den())) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

void canonicalize_int_vector(std::vector<Int>& v) {
    Int g = 0;
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return;
    for (Int& x : v) x /= g;
    for (const Int& x : v) {
        if (x != 0) {
            if (x < 0) for (Int& y : v) y = -y;
            break;
        }
    }
}

std::vector<Int> clear_denominators(const std::vector<Rat>& v) {
    Int lcm = 1;
    for (const Rat& q : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
    std::vector<Int> out;
    out.reserve(v.size());
    for (const Rat& q : v) out.push_back(Int(q.get_num()) * (lcm / Int(q.get_den())));
    canonicalize_int_vector(out);
    return out;
}

} // namespace rrd
