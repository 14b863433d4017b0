#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace rrd {

// Fixed-width bit vector over 64-bit words; the canonical row/column form
// for intersection and union queries.
class BitVec {
public:
    BitVec() : n_(0) {}
    explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t size() const { return n_; }
    size_t words() const { return w_.size(); }
    uint64_t word(size_t i) const { return w_[i]; }

    void set(size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
    void reset(size_t i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void clear() { for (auto& w : w_) w = 0; }

    size_t count() const {
        size_t c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }

    bool any() const {
        for (uint64_t w : w_) if (w) return true;
        return false;
    }

    BitVec& operator|=(const BitVec& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }
    BitVec& operator&=(const BitVec& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    BitVec& and_not(const BitVec& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
        return *this;
    }

    size_t intersection_count(const BitVec& o) const {
        size_t c = 0;
        for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
        return c;
    }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

    std::vector<uint32_t> to_list() const {
        std::vector<uint32_t> out;
        out.reserve(count());
        for (size_t wi = 0; wi < w_.size(); ++wi) {
            uint64_t w = w_[wi];
            while (w) {
                out.push_back(static_cast<uint32_t>(wi * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    static BitVec from_list(size_t n, const std::vector<uint32_t>& xs) {
        BitVec b(n);
        for (uint32_t x : xs) b.set(x);
        return b;
    }

    const std::vector<uint64_t>& raw() const { return w_; }
    uint64_t* data() { return w_.data(); }
    const uint64_t* data() const { return w_.data(); }

private:
    size_t n_;
    std::vector<uint64_t> w_;
};

// Popcount of the AND of two word spans (rows stored in a flat array).
inline size_t and_count(const uint64_t* a, const uint64_t* b, size_t words) {
    size_t c = 0;
    for (size_t i = 0; i < words; ++i) c += std::popcount(a[i] & b[i]);
    return c;
}

} // namespace rrd
