#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "rrd/sampler.hpp"
#include "rrd/stats.hpp"

using namespace rrd;

namespace {

std::map<std::vector<uint32_t>, size_t> state_index(uint32_t n, uint32_t d) {
    std::map<std::vector<uint32_t>, size_t> idx;
    enumerate_all(n, d, [&](const Digraph& g) {
        idx.emplace(g.flat_key(), idx.size());
        return true;
    });
    return idx;
}

} // namespace

TEST_CASE("count_all reference values") {
    CHECK(count_all(3, 1) == 6);
    CHECK(count_all(4, 2) == 90);
    CHECK(count_all(5, 2) == 2040);
    CHECK(count_all(6, 2) == 67950);
    for (uint32_t n = 1; n <= 6; ++n) CHECK(count_all(n, n) == 1);
}

TEST_CASE("count_all complement identity for n <= 5") {
    for (uint32_t n = 2; n <= 5; ++n)
        for (uint32_t d = 1; d < n; ++d) CHECK(count_all(n, d) == count_all(n, n - d));
}

TEST_CASE("enumerate_all emits each element exactly once") {
    std::set<std::vector<uint32_t>> seen;
    uint64_t count = 0;
    enumerate_all(4, 2, [&](const Digraph& g) {
        CHECK(g.n() == 4);
        CHECK(g.d() == 2);
        seen.insert(g.flat_key());
        ++count;
        return true;
    });
    CHECK(count == 90);
    CHECK(seen.size() == 90);
    // early stop
    count = 0;
    enumerate_all(4, 2, [&](const Digraph&) { return ++count < 10; });
    CHECK(count == 10);
}

TEST_CASE("enumerate_all(3,1) yields the six permutation matrices") {
    uint64_t count = 0;
    enumerate_all(3, 1, [&](const Digraph& g) {
        ++count;
        std::vector<bool> hit(3, false);
        for (uint32_t i = 0; i < 3; ++i) {
            REQUIRE(g.out_neighbors(i).size() == 1);
            hit[g.out_neighbors(i)[0]] = true;
        }
        CHECK((hit[0] && hit[1] && hit[2]));
        return true;
    });
    CHECK(count == 6);
}

TEST_CASE("enumerate_all refuses above the cap with the exact cost") {
    CHECK_THROWS_WITH_AS(enumerate_all(7, 2, [](const Digraph&) { return true; }),
                         doctest::Contains("3110940"), std::invalid_argument);
}

TEST_CASE("tiny spaces") {
    Rng rng(1);
    Digraph g = sample_configuration(1, 1, rng);
    CHECK(g.n() == 1);
    CHECK(g.has_edge(0, 0)); // the single loop graph
    ChainConfig cc;
    Rng rng2(2);
    Digraph h = sample_switch_chain(4, 4, cc, rng2);
    for (uint32_t i = 0; i < 4; ++i) CHECK(h.out_neighbors(i).size() == 4); // all-ones
}

TEST_CASE("n=2 d=1: both states near 1/2 over 10^4 draws") {
    for (auto method : {ChainConfig::Method::configuration, ChainConfig::Method::switching}) {
        ChainConfig cc;
        cc.method = method;
        Rng rng(11);
        uint64_t identity = 0;
        const uint64_t N = 10000;
        for (uint64_t t = 0; t < N; ++t) {
            Rng r = rng.derive(t);
            Digraph g = sample_auto(2, 1, cc, r);
            identity += g.has_edge(0, 0) ? 1 : 0;
        }
        double p = static_cast<double>(identity) / N;
        double sigma = std::sqrt(0.25 / N);
        CHECK(std::abs(p - 0.5) <= 3.0 * sigma);
    }
}

TEST_CASE("sampler uniformity on (4,2) by chi-square at alpha=0.01") {
    auto idx = state_index(4, 2);
    REQUIRE(idx.size() == 90);
    const uint64_t N = 30000;
    for (auto method : {ChainConfig::Method::configuration, ChainConfig::Method::switching}) {
        ChainConfig cc;
        cc.method = method;
        std::vector<uint64_t> obs(90, 0);
        Rng rng(method == ChainConfig::Method::configuration ? 101 : 202);
        for (uint64_t t = 0; t < N; ++t) {
            Rng r = rng.derive(t);
            ++obs[idx.at(sample_auto(4, 2, cc, r).flat_key())];
        }
        ChiSquare cs = chi_square_uniform(obs, N, 0.01);
        INFO("method ", ChainConfig::method_name(method), " chi2 ", cs.statistic, " crit ", cs.critical);
        CHECK(cs.pass);
    }
}

TEST_CASE("configuration and switch chain agree in distribution on (5,2)") {
    auto idx = state_index(5, 2);
    REQUIRE(idx.size() == 2040);
    const uint64_t N = 100000;
    for (auto method : {ChainConfig::Method::configuration, ChainConfig::Method::switching}) {
        ChainConfig cc;
        cc.method = method;
        std::vector<uint64_t> obs(idx.size(), 0);
        Rng rng(method == ChainConfig::Method::configuration ? 505 : 606);
        for (uint64_t t = 0; t < N; ++t) {
            Rng r = rng.derive(t);
            ++obs[idx.at(sample_auto(5, 2, cc, r).flat_key())];
        }
        ChiSquare cs = chi_square_uniform(obs, N, 0.01);
        INFO("method ", ChainConfig::method_name(method), " chi2 ", cs.statistic, " crit ", cs.critical);
        CHECK(cs.pass);
    }
}

TEST_CASE("fixed seed replays bit-identically") {
    ChainConfig cc;
    cc.method = ChainConfig::Method::switching;
    Rng a(77), b(77);
    Digraph g1 = sample_switch_chain(20, 3, cc, a);
    Digraph g2 = sample_switch_chain(20, 3, cc, b);
    CHECK(g1 == g2);
    Rng c(78);
    CHECK_FALSE(sample_switch_chain(20, 3, cc, c) == g1);
}

TEST_CASE("explicit start state is honored") {
    ChainConfig cc;
    Rng rng(5);
    Digraph start = Digraph::circulant(8, 2);
    Digraph g = sample_switch_chain(8, 2, cc, rng, start);
    CHECK(g.n() == 8);
    CHECK(g.d() == 2);
}

TEST_CASE("frozen feasibility") {
    // n=2, d=1: freezing both columns onto row 0 over-commits the row.
    FrozenColumnSet bad;
    bad.cols = {0, 1};
    bad.supports = {{0}, {0}};
    std::string why;
    CHECK_FALSE(frozen_feasible(2, 1, bad, &why));
    CHECK(!why.empty());
    CHECK_THROWS_AS(frozen_completion(2, 1, bad), InfeasibleError);

    FrozenColumnSet ok;
    ok.cols = {0};
    ok.supports = {{0, 1}};
    CHECK(frozen_feasible(4, 2, ok));
    Digraph comp = frozen_completion(4, 2, ok);
    CHECK(comp.in_neighbors(0) == std::vector<uint32_t>{0, 1});
}

TEST_CASE("fully constrained conditional returns that exact graph") {
    Digraph g = Digraph::circulant(5, 2);
    FrozenColumnSet all;
    for (uint32_t j = 0; j < 5; ++j) {
        all.cols.push_back(j);
        all.supports.push_back(g.in_neighbors(j));
    }
    ChainConfig cc;
    Rng rng(9);
    CHECK(sample_conditional(5, 2, all, cc, rng) == g);
}

TEST_CASE("conditional sampler preserves frozen supports") {
    FrozenColumnSet frozen;
    frozen.cols = {0, 2};
    frozen.supports = {{0, 1, 2}, {1, 3, 4}};
    ChainConfig cc;
    Rng rng(13);
    for (uint64_t t = 0; t < 25; ++t) {
        Rng r = rng.derive(t);
        Digraph g = sample_conditional(6, 3, frozen, cc, r);
        CHECK(g.in_neighbors(0) == std::vector<uint32_t>{0, 1, 2});
        CHECK(g.in_neighbors(2) == std::vector<uint32_t>{1, 3, 4});
    }
}

TEST_CASE("conditional sampler uniform over completions at (4,2)") {
    FrozenColumnSet frozen;
    frozen.cols = {0};
    frozen.supports = {{0, 1}};
    // Filtered enumeration oracle.
    std::map<std::vector<uint32_t>, size_t> idx;
    enumerate_all(4, 2, [&](const Digraph& g) {
        if (g.in_neighbors(0) == std::vector<uint32_t>{0, 1}) idx.emplace(g.flat_key(), idx.size());
        return true;
    });
    REQUIRE(idx.size() > 1);
    const uint64_t N = 20000;
    std::vector<uint64_t> obs(idx.size(), 0);
    ChainConfig cc;
    Rng rng(303);
    for (uint64_t t = 0; t < N; ++t) {
        Rng r = rng.derive(t);
        Digraph g = sample_conditional(4, 2, frozen, cc, r);
        ++obs[idx.at(g.flat_key())];
    }
    ChiSquare cs = chi_square_uniform(obs, N, 0.01);
    INFO("cells ", idx.size(), " chi2 ", cs.statistic, " crit ", cs.critical);
    CHECK(cs.pass);
}

TEST_CASE("empty frozen set matches the unrestricted chain in distribution") {
    auto idx = state_index(4, 2);
    const uint64_t N = 20000;
    std::vector<uint64_t> obs(idx.size(), 0);
    ChainConfig cc;
    Rng rng(404);
    FrozenColumnSet none;
    for (uint64_t t = 0; t < N; ++t) {
        Rng r = rng.derive(t);
        ++obs[idx.at(sample_conditional(4, 2, none, cc, r).flat_key())];
    }
    ChiSquare cs = chi_square_uniform(obs, N, 0.01);
    CHECK(cs.pass);
}

TEST_CASE("configuration model rejects hopeless budgets with advice") {
    Rng rng(1);
    CHECK_THROWS_WITH_AS(sample_configuration(30, 10, rng, 3), doctest::Contains("switch chain"),
                         InfeasibleError);
}

TEST_CASE("every emitted sample satisfies the digraph invariants") {
    // Construction re-validates; draw across methods and shapes.
    ChainConfig cc;
    Rng rng(55);
    for (auto [n, d] : std::vector<std::pair<uint32_t, uint32_t>>{{6, 2}, {9, 4}, {7, 7}, {12, 1}}) {
        for (uint64_t t = 0; t < 10; ++t) {
            Rng r = rng.derive(static_cast<uint64_t>(n) * 100 + d * 10 + t);
            Digraph g = sample_auto(n, d, cc, r);
            CHECK(g.n() == n);
            CHECK(g.d() == d);
        }
    }
}
