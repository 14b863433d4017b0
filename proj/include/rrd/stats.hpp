#pragma once

#include <cstdint>
#include <vector>

namespace rrd {

struct Interval {
    double lo = 0.0, hi = 1.0;
};

// Wilson score interval; at zero counts the upper end plays the role of the
// rule-of-three bound. Always contains x/n.
Interval wilson_interval(uint64_t successes, uint64_t n, double z = 1.959963985);

// Upper critical value of chi-square with k dof (Wilson-Hilferty).
double chi_square_critical(uint64_t dof, double alpha);

struct ChiSquare {
    double statistic = 0.0;
    double critical = 0.0;
    uint64_t dof = 0;
    bool pass = false; // statistic <= critical
};

// Goodness of fit of observed counts against uniform cell probabilities.
ChiSquare chi_square_uniform(const std::vector<uint64_t>& observed, uint64_t n_samples, double alpha);
// Against arbitrary expected counts.
ChiSquare chi_square_expected(const std::vector<uint64_t>& observed, const std::vector<double>& expected,
                              double alpha);

struct CollisionEstimate {
    double collision_hat = 0.0; // unbiased estimate of sum_v p_v^2
    double sigma = 0.0;         // plug-in U-statistic standard error
    double max_atom_hat = 0.0;  // modal frequency (diagnostic only)
    uint64_t n_samples = 0;
    uint64_t distinct = 0;
};

// From the multiset of per-value counts of N samples.
CollisionEstimate collision_estimate(const std::vector<uint64_t>& value_counts, uint64_t n_samples);

} // namespace rrd
