#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace berngt {

/// Fixed-length bit vector packed into 64-bit words, LSB-first:
/// bit i lives in word i/64 at position i%64.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }
    std::size_t word_count() const { return words_.size(); }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
    void set(std::size_t i, bool v) {
        if (v) set(i); else words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
    }

    std::span<const uint64_t> words() const { return words_; }
    std::span<uint64_t> words() { return words_; }

    std::size_t count() const {
        std::size_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    void or_with(std::span<const uint64_t> other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other[w];
    }

    /// Complement within the declared length (tail bits stay zero).
    void flip_all() {
        for (auto& w : words_) w = ~w;
        mask_tail();
    }

    void set_all() {
        for (auto& w : words_) w = ~uint64_t{0};
        mask_tail();
    }

    bool operator==(const BitVec& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

    /// Sorted list of set bit positions.
    std::vector<int> to_indices() const {
        std::vector<int> out;
        out.reserve(count());
        for (std::size_t w = 0; w < words_.size(); ++w) {
            uint64_t x = words_[w];
            while (x) {
                out.push_back(static_cast<int>(w * 64 + std::countr_zero(x)));
                x &= x - 1;
            }
        }
        return out;
    }

    void mask_tail() {
        const std::size_t rem = nbits_ & 63;
        if (rem != 0 && !words_.empty()) words_.back() &= (uint64_t{1} << rem) - 1;
    }

private:
    std::size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

inline bool words_intersect(std::span<const uint64_t> a, std::span<const uint64_t> b) {
    const std::size_t m = a.size() < b.size() ? a.size() : b.size();
    for (std::size_t w = 0; w < m; ++w)
        if (a[w] & b[w]) return true;
    return false;
}

} // namespace berngt
