#pragma once

#include <cstdint>

namespace rrd {

// SplitMix64 stream. Chosen over std:: engines because the output sequence
// (including bounded draws below) is pinned by this file alone, so runs are
// bit-reproducible across platforms and standard-library versions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased draw in [0, bound) by rejection.
    uint64_t below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Signed uniform integer in [lo, hi].
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    // Splittable derivation: task k of a run gets mix(master_seed, k), so
    // results do not depend on which worker executes which task.
    static uint64_t mix(uint64_t seed, uint64_t k) {
        uint64_t z = seed ^ (k + 0x9E3779B97F4A7C15ull + (seed << 6) + (seed >> 2));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    Rng derive(uint64_t k) const { return Rng(mix(state_, k)); }

private:
    uint64_t state_;
};

} // namespace rrd
