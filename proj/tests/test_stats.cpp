#include <doctest.h>

#include <cmath>
#include <vector>

#include "rrd/stats.hpp"

using namespace rrd;

TEST_CASE("wilson interval contains the point estimate") {
    for (uint64_t n : {10ull, 100ull, 100000ull}) {
        for (uint64_t x : std::vector<uint64_t>{0, 1, n / 2, n - 1, n}) {
            Interval iv = wilson_interval(x, n);
            double p = static_cast<double>(x) / n;
            CHECK(iv.lo <= p + 1e-12);
            CHECK(iv.hi >= p - 1e-12);
            CHECK(iv.lo >= 0.0);
            CHECK(iv.hi <= 1.0);
        }
    }
    CHECK(wilson_interval(0, 1000).lo == 0.0);
    // rule-of-three analog at zero successes: upper bound near z^2/n
    CHECK(wilson_interval(0, 1000).hi < 0.005);
    CHECK(wilson_interval(0, 1000).hi > 0.002);
}

TEST_CASE("chi-square critical values (Wilson-Hilferty)") {
    CHECK(chi_square_critical(1, 0.01) == doctest::Approx(6.635).epsilon(0.02));
    CHECK(chi_square_critical(10, 0.01) == doctest::Approx(23.209).epsilon(0.01));
    CHECK(chi_square_critical(89, 0.01) == doctest::Approx(122.94).epsilon(0.005));
    CHECK(chi_square_critical(2039, 0.01) == doctest::Approx(2188.2).epsilon(0.005));
}

TEST_CASE("chi-square test on exact uniform counts") {
    std::vector<uint64_t> obs(10, 100);
    ChiSquare cs = chi_square_uniform(obs, 1000, 0.01);
    CHECK(cs.statistic == doctest::Approx(0.0));
    CHECK(cs.pass);
    obs[0] = 400;
    obs[1] = 0;
    obs[2] = 0;
    obs[3] = 0;
    cs = chi_square_uniform(obs, 1000, 0.01);
    CHECK_FALSE(cs.pass);
}

TEST_CASE("collision estimator exact bookkeeping") {
    // 4 samples: values a,a,b,b -> 2 equal pairs of 6.
    std::vector<uint64_t> counts{2, 2};
    CollisionEstimate ce = collision_estimate(counts, 4);
    CHECK(ce.collision_hat == doctest::Approx(2.0 / 6.0));
    CHECK(ce.max_atom_hat == doctest::Approx(0.5));
    CHECK(ce.distinct == 2);
    CHECK(ce.sigma > 0.0);
}
