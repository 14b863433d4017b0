#include "rrd/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace rrd {

Interval wilson_interval(uint64_t successes, uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    double p = static_cast<double>(successes) / static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Interval iv;
    iv.lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    iv.hi = successes == n ? 1.0 : std::min(1.0, center + half);
    return iv;
}

double chi_square_critical(uint64_t dof, double alpha) {
    if (dof == 0) throw std::invalid_argument("chi_square_critical: dof must be positive");
    // z for the upper alpha tail of the standard normal (Acklam-style inverse
    // is overkill; the few alphas used here are pinned).
    double z;
    if (alpha == 0.01) z = 2.326347874;
    else if (alpha == 0.05) z = 1.644853627;
    else if (alpha == 0.001) z = 3.090232306;
    else throw std::invalid_argument("chi_square_critical: unsupported alpha");
    double k = static_cast<double>(dof);
    double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * t * t * t;
}

ChiSquare chi_square_uniform(const std::vector<uint64_t>& observed, uint64_t n_samples, double alpha) {
    std::vector<double> expected(observed.size(),
                                 static_cast<double>(n_samples) / static_cast<double>(observed.size()));
    return chi_square_expected(observed, expected, alpha);
}

ChiSquare chi_square_expected(const std::vector<uint64_t>& observed, const std::vector<double>& expected,
                              double alpha) {
    if (observed.size() != expected.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square: need matching cell vectors with >= 2 cells");
    ChiSquare cs;
    cs.dof = observed.size() - 1;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw std::invalid_argument("chi_square: nonpositive expected count");
        double diff = static_cast<double>(observed[i]) - expected[i];
        cs.statistic += diff * diff / expected[i];
    }
    cs.critical = chi_square_critical(cs.dof, alpha);
    cs.pass = cs.statistic <= cs.critical;
    return cs;
}

CollisionEstimate collision_estimate(const std::vector<uint64_t>& value_counts, uint64_t n_samples) {
    CollisionEstimate ce;
    ce.n_samples = n_samples;
    ce.distinct = value_counts.size();
    if (n_samples < 2) return ce;
    double n = static_cast<double>(n_samples);
    double pairs_equal = 0.0;
    uint64_t max_count = 0;
    double p2 = 0.0, p3 = 0.0;
    for (uint64_t c : value_counts) {
        double cd = static_cast<double>(c);
        pairs_equal += cd * (cd - 1.0) / 2.0;
        max_count = std::max(max_count, c);
        double ph = cd / n;
        p2 += ph * ph;
        p3 += ph * ph * ph;
    }
    double total_pairs = n * (n - 1.0) / 2.0;
    ce.collision_hat = pairs_equal / total_pairs;
    ce.max_atom_hat = static_cast<double>(max_count) / n;
    // Plug-in U-statistic variance: zeta1 = sum p^3 - theta^2, zeta2 = theta - theta^2.
    double theta = ce.collision_hat;
    double zeta1 = std::max(0.0, p3 - theta * theta);
    double zeta2 = std::max(0.0, theta - theta * theta);
    double var = (2.0 * (n - 2.0) * zeta1 + zeta2) / total_pairs;
    ce.sigma = std::sqrt(std::max(0.0, var));
    return ce;
}

} // namespace rrd
