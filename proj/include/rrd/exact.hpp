#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace rrd {

// Exact arithmetic throughout: rank decisions, kernel vectors, subset-sum
// atoms and every threshold comparison stay in Z / Q. No floating point on
// any decision path.
using Int = mpz_class;
using Rat = mpq_class;

Int binomial(uint64_t n, uint64_t k);

// Accepts "3", "-2/7" and plain decimals like "0.25".
Rat rat_parse(const std::string& s);

std::string rat_str(const Rat& q);
std::string int_str(const Int& z);

inline double rat_double(const Rat& q) { return q.get_d(); }

// Deterministic Miller-Rabin, valid for the full 64-bit range.
bool is_prime_u64(uint64_t n);

// First prime >= lo found by a seeded scan (used to pick word-size moduli).
uint64_t next_prime_from(uint64_t lo);

size_t hash_int(const Int& z);
size_t hash_rat(const Rat& q);

struct RatHash {
    size_t operator()(const Rat& q) const { return hash_rat(q); }
};

// Divide out the gcd and make the first nonzero entry positive.
void canonicalize_int_vector(std::vector<Int>& v);

// Scale a rational vector to the canonical coprime integer vector.
std::vector<Int> clear_denominators(const std::vector<Rat>& v);

} // namespace rrd
