#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "berngt/bitvec.hpp"
#include "berngt/rng.hpp"

namespace berngt {

/// Sorted, duplicate-free set of item indices in [0, n). Items are
/// 0-indexed everywhere except display.
struct DefectiveSet {
    std::vector<int> items;

    DefectiveSet() = default;
    explicit DefectiveSet(std::vector<int> sorted_items) : items(std::move(sorted_items)) {}

    int size() const { return static_cast<int>(items.size()); }
    bool operator==(const DefectiveSet&) const = default;

    bool contains(int item) const;
    BitVec to_mask(int n) const;
    static DefectiveSet from_mask(const BitVec& mask);
};

/// T-row binary inclusion matrix: bit i of row t says item i is in test t.
/// Rows are the packed axis since decoding scans per test.
class TestDesign {
public:
    TestDesign(int n, int T, double p = 0.0, uint64_t seed = 0)
        : n_(n), tests_(T), words_per_row_((n + 63) / 64), p_(p), seed_(seed),
          bits_(static_cast<std::size_t>(T) * words_per_row_, 0) {}

    int items() const { return n_; }
    int tests() const { return tests_; }
    int words_per_row() const { return words_per_row_; }
    double p() const { return p_; }
    uint64_t seed() const { return seed_; }

    std::span<const uint64_t> row(int t) const {
        return {bits_.data() + static_cast<std::size_t>(t) * words_per_row_,
                static_cast<std::size_t>(words_per_row_)};
    }
    std::span<uint64_t> row(int t) {
        return {bits_.data() + static_cast<std::size_t>(t) * words_per_row_,
                static_cast<std::size_t>(words_per_row_)};
    }

    bool includes(int item, int t) const {
        return (row(t)[item >> 6] >> (item & 63)) & 1u;
    }
    void set(int item, int t) { row(t)[item >> 6] |= uint64_t{1} << (item & 63); }

    std::size_t ones() const;

    /// Items that appear in no test at all.
    std::vector<int> untested_items() const;

    friend TestDesign generate_design(int n, int T, double p, uint64_t seed,
                                      std::size_t max_cells);

private:
    int n_;
    int tests_;
    int words_per_row_;
    double p_ = 0.0;
    uint64_t seed_ = 0;
    std::vector<uint64_t> bits_;
};

/// Outcome vector y: bit t set means test t was positive.
struct OutcomeVector {
    explicit OutcomeVector(int T) : bits(static_cast<std::size_t>(T)) {}

    BitVec bits;

    int tests() const { return static_cast<int>(bits.size()); }
    bool positive(int t) const { return bits.test(t); }
    int positive_count() const { return static_cast<int>(bits.count()); }
    bool operator==(const OutcomeVector&) const = default;
};

inline constexpr std::size_t kDefaultMaxDesignCells = std::size_t{1} << 31;

/// Bernoulli(p) design: every cell is an independent p-coin. The sampler
/// compares each item's uniform bit stream against the binary expansion of
/// p, 64 items per word, which is exact in p and reproducible bit-for-bit
/// from (n, T, p, seed) on any platform.
TestDesign generate_design(int n, int T, double p, uint64_t seed,
                           std::size_t max_cells = kDefaultMaxDesignCells);

/// Uniform size-k subset of [0, n) by Floyd's algorithm; deterministic in seed.
DefectiveSet sample_defective_set(int n, int k, uint64_t seed);

/// Noiseless rule: test t is positive iff it contains a defective.
OutcomeVector run_tests(const TestDesign& design, const DefectiveSet& defectives);

/// True iff candidate would have produced exactly the observed outcomes.
bool is_satisfying(const TestDesign& design, const OutcomeVector& y,
                   const DefectiveSet& candidate);

namespace detail {
/// Fills words with independent Bernoulli(p) bits (64 per word) by the
/// lexicographic comparison method: scan p's binary digits, resolving each
/// lane once its uniform stream diverges from the digit sequence.
void fill_bernoulli_words(std::span<uint64_t> words, double p, Xoshiro256StarStar& rng);
} // namespace detail

} // namespace berngt
