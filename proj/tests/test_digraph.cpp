#include <doctest.h>

#include <stdexcept>

#include "rrd/digraph.hpp"
#include "rrd/rng.hpp"
#include "rrd/sampler.hpp"

using namespace rrd;

namespace {

Digraph four_cycle() {
    // d = 1, out_adj[i] = {i+1 mod 4}
    return Digraph(4, 1, {{1}, {2}, {3}, {0}});
}

} // namespace

TEST_CASE("construction validates invariants") {
    CHECK_THROWS_AS(Digraph(3, 1, {{0}, {0}, {2}}), std::invalid_argument); // column sums
    CHECK_THROWS_AS(Digraph(3, 2, {{0, 0}, {1, 2}, {1, 2}}), std::invalid_argument); // dup edge
    CHECK_THROWS_AS(Digraph(3, 2, {{0, 3}, {1, 2}, {1, 2}}), std::invalid_argument); // range
    CHECK_THROWS_AS(Digraph(2, 1, {{0}, {1}, {0}}), std::invalid_argument); // row count
    Digraph g(3, 1, {{1}, {2}, {0}});
    CHECK(g.in_neighbors(1) == std::vector<uint32_t>{0});
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(1, 0));
}

TEST_CASE("n_in examples") {
    Digraph g = four_cycle();
    CHECK(g.n_in({}).empty());
    CHECK(g.n_in({0, 1}) == std::vector<uint32_t>{0, 3});
    // singleton has exactly d in-neighbors
    Rng rng(5);
    ChainConfig cc;
    Digraph h = sample_auto(10, 3, cc, rng);
    for (uint32_t v = 0; v < 10; ++v) CHECK(h.n_in({v}).size() == 3);
    CHECK_THROWS_AS(g.n_in({9}), std::invalid_argument);
}

TEST_CASE("n_in cardinality bounds |S| <= |N^in(S)| <= d|S|") {
    Rng rng(99);
    ChainConfig cc;
    for (uint32_t trial = 0; trial < 20; ++trial) {
        Rng r = rng.derive(trial);
        Digraph g = sample_auto(12, 3, cc, r);
        for (uint32_t k = 1; k <= 12; ++k) {
            std::vector<uint32_t> s;
            for (uint32_t v = 0; v < k; ++v) s.push_back(v);
            size_t nin = g.n_in(s).size();
            CHECK(nin >= s.size());
            CHECK(nin <= static_cast<size_t>(3) * s.size());
        }
    }
}

TEST_CASE("edges_between examples") {
    Digraph g = four_cycle();
    std::vector<uint32_t> all{0, 1, 2, 3};
    CHECK(g.edges_between(all, all) == 4); // n*d
    for (uint32_t j = 0; j < 4; ++j) CHECK(g.edges_between(all, {j}) == 1);
    CHECK(g.edges_between({0, 1}, {2, 3}) == 1); // only (1,2)
    std::vector<std::pair<uint32_t, uint32_t>> edges;
    g.edges_between({0, 1}, {2, 3}, &edges);
    CHECK(edges == std::vector<std::pair<uint32_t, uint32_t>>{{1, 2}});
}

TEST_CASE("edge count identities on random graphs") {
    Rng rng(7);
    ChainConfig cc;
    Digraph g = sample_auto(9, 4, cc, rng);
    std::vector<uint32_t> all;
    for (uint32_t v = 0; v < 9; ++v) all.push_back(v);
    CHECK(g.edges_between(all, {1, 5, 7}) == 3u * 4u);
    CHECK(g.edges_between({2, 3}, all) == 2u * 4u);
}

TEST_CASE("co_out examples") {
    CHECK(four_cycle().co_out(0, 1).empty());
    Digraph c2 = Digraph::circulant(4, 2); // out_adj[i] = {i, i+1}
    CHECK(c2.co_out(0, 1) == std::vector<uint32_t>{1});
    CHECK_THROWS_AS(c2.co_out(1, 1), std::invalid_argument);
    Digraph full = Digraph::circulant(4, 4);
    CHECK(full.co_out(0, 1).size() == 4);
    CHECK(full.in_dco(Rat(1)));
    CHECK_FALSE(full.in_dco(Rat(1, 2)));
    CHECK(four_cycle().in_dco(Rat(1, 2)));
}

TEST_CASE("delta_vector examples") {
    Digraph g = four_cycle();
    auto dv = delta_vector(g, {2});
    CHECK(dv.support_size() == 1);
    CHECK(dv.bits.test(1));
    CHECK_THROWS_AS(delta_vector(g, {}), std::invalid_argument);

    Digraph c6 = Digraph::circulant(6, 2);
    auto dv6 = delta_vector(c6, {0});
    CHECK(dv6.support_size() == 2);
    CHECK(dv6.bits.test(5));
    CHECK(dv6.bits.test(0));

    std::vector<uint32_t> all{0, 1, 2, 3, 4, 5};
    CHECK(delta_vector(c6, all).support_size() == 6);
}

TEST_CASE("delta_vector support equals n_in and respects bounds") {
    Rng rng(17);
    ChainConfig cc;
    for (uint32_t trial = 0; trial < 10; ++trial) {
        Rng r = rng.derive(trial);
        Digraph g = sample_auto(14, 4, cc, r);
        std::vector<uint32_t> j{1, 3, 8};
        auto dv = delta_vector(g, j);
        CHECK(dv.bits.to_list() == g.n_in(j));
        CHECK(dv.support_size() >= std::max<size_t>(4, j.size()));
        CHECK(dv.support_size() <= 4 * j.size());
    }
}

TEST_CASE("switching examples") {
    Digraph g = four_cycle();
    // valid: destroy (0,1),(2,3), create (0,3),(2,1)
    auto [st, res] = g.apply_switching({0, 1, 2, 3});
    REQUIRE(st == SwitchStatus::applied);
    REQUIRE(res.has_value());
    CHECK(res->has_edge(0, 3));
    CHECK(res->has_edge(2, 1));
    CHECK(res->has_edge(1, 2));
    CHECK(res->has_edge(3, 0));
    CHECK(res->d() == 1);
    // inverse restores the original
    auto [st2, back] = res->apply_switching({0, 3, 2, 1});
    REQUIRE(st2 == SwitchStatus::applied);
    CHECK(*back == g);
    // rejection when (i1,j2) already present
    Digraph c2 = Digraph::circulant(4, 2);
    auto [st3, none] = c2.apply_switching({0, 0, 1, 1}); // (0,1) present already
    CHECK(st3 == SwitchStatus::would_duplicate);
    CHECK_FALSE(none.has_value());
    auto [st4, none4] = c2.apply_switching({0, 2, 1, 3}); // (0,2) not an edge
    CHECK(st4 == SwitchStatus::missing_edge);
    CHECK_FALSE(none4.has_value());
    auto [st5, none5] = c2.apply_switching({0, 1, 0, 2});
    CHECK(st5 == SwitchStatus::degenerate_indices);
    CHECK_FALSE(none5.has_value());
}

TEST_CASE("switching preserves margins on random moves") {
    Rng rng(23);
    ChainConfig cc;
    Digraph g = sample_auto(10, 3, cc, rng);
    uint32_t applied = 0;
    for (uint32_t t = 0; t < 200; ++t) {
        uint32_t i1 = static_cast<uint32_t>(rng.below(10));
        uint32_t i2 = static_cast<uint32_t>(rng.below(10));
        uint32_t j1 = g.out_neighbors(i1)[rng.below(3)];
        uint32_t j2 = g.out_neighbors(i2)[rng.below(3)];
        auto [st, res] = g.apply_switching({i1, j1, i2, j2});
        if (st == SwitchStatus::applied) {
            ++applied;
            // Digraph construction re-validates all margin invariants.
            g = *res;
        }
    }
    CHECK(applied > 0);
    CHECK(g.d() == 3);
}

TEST_CASE("complement examples") {
    Digraph id3(3, 1, {{0}, {1}, {2}});
    Digraph c = id3.complement();
    CHECK(c.d() == 2);
    CHECK(c.out_neighbors(0) == std::vector<uint32_t>{1, 2});
    CHECK(c.out_neighbors(1) == std::vector<uint32_t>{0, 2});
    CHECK(id3.complement().complement() == id3);

    Digraph c2 = Digraph::circulant(4, 2);
    Digraph cc2 = c2.complement();
    for (uint32_t i = 0; i < 4; ++i) {
        CHECK(cc2.has_edge(i, (i + 2) % 4));
        CHECK(cc2.has_edge(i, (i + 3) % 4));
    }
    CHECK_THROWS_AS(Digraph::circulant(3, 3).complement(), std::invalid_argument);
}

TEST_CASE("text format round trip is bit exact") {
    Digraph g = four_cycle();
    CHECK(g.serialize() == "4 1\n1\n2\n3\n0\n");
    CHECK(Digraph::parse(g.serialize()) == g);
    Rng rng(31);
    ChainConfig cc;
    for (uint32_t t = 0; t < 20; ++t) {
        Rng r = rng.derive(t);
        Digraph h = sample_auto(11, 4, cc, r);
        std::string text = h.serialize();
        CHECK(Digraph::parse(text).serialize() == text);
    }
    CHECK_THROWS_AS(Digraph::parse("3 1\n0\n1\n"), std::invalid_argument);
    CHECK_THROWS_AS(Digraph::parse("junk"), std::invalid_argument);
}
