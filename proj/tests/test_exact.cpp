#include <doctest.h>

#include "rrd/exact.hpp"

using namespace rrd;

TEST_CASE("binomial values") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(20, 10) == Int("184756"));
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(0, 0) == 1);
}

TEST_CASE("rational parsing") {
    CHECK(rat_parse("1/3") == Rat(1, 3));
    CHECK(rat_parse("-2/6") == Rat(-1, 3));
    CHECK(rat_parse("0.25") == Rat(1, 4));
    CHECK(rat_parse("3") == Rat(3));
    CHECK_THROWS_AS(rat_parse(""), std::invalid_argument);
}

TEST_CASE("primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64((1ull << 31) - 1));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64((1ull << 30) + 1));
    uint64_t p = next_prime_from(1ull << 30);
    CHECK(p >= (1ull << 30));
    CHECK(is_prime_u64(p));
}

TEST_CASE("vector canonicalization") {
    std::vector<Int> v{Int(-4), Int(2), Int(-6)};
    canonicalize_int_vector(v);
    CHECK(v == std::vector<Int>{Int(2), Int(-1), Int(3)});

    std::vector<Rat> q{Rat(1, 2), Rat(-1, 3), Rat(0)};
    auto w = clear_denominators(q);
    CHECK(w == std::vector<Int>{Int(3), Int(-2), Int(0)});
}

TEST_CASE("rational hashing respects canonical form") {
    Rat a(2, 4), b(1, 2);
    a.canonicalize();
    CHECK(hash_rat(a) == hash_rat(b));
}
