#include "berngt/design.hpp"

#include <algorithm>
#include <stdexcept>

namespace berngt {

bool DefectiveSet::contains(int item) const {
    return std::binary_search(items.begin(), items.end(), item);
}

BitVec DefectiveSet::to_mask(int n) const {
    BitVec mask(static_cast<std::size_t>(n));
    for (int i : items) {
        if (i < 0 || i >= n) throw std::out_of_range("DefectiveSet: item outside [0,n)");
        mask.set(static_cast<std::size_t>(i));
    }
    return mask;
}

DefectiveSet DefectiveSet::from_mask(const BitVec& mask) {
    return DefectiveSet(mask.to_indices());
}

std::size_t TestDesign::ones() const {
    std::size_t c = 0;
    for (int t = 0; t < tests_; ++t)
        for (uint64_t w : row(t)) c += std::popcount(w);
    return c;
}

std::vector<int> TestDesign::untested_items() const {
    BitVec seen(static_cast<std::size_t>(n_));
    for (int t = 0; t < tests_; ++t) seen.or_with(row(t));
    seen.flip_all();
    return seen.to_indices();
}

namespace detail {

void fill_bernoulli_words(std::span<uint64_t> words, double p, Xoshiro256StarStar& rng) {
    if (p <= 0.0) {
        std::fill(words.begin(), words.end(), uint64_t{0});
        return;
    }
    if (p >= 1.0) {
        std::fill(words.begin(), words.end(), ~uint64_t{0});
        return;
    }
    // Binary digits of p; doubling and subtracting are exact for doubles,
    // so the expansion terminates (at most exponent + 53 digits).
    bool digits[1100];
    int ndigits = 0;
    double x = p;
    while (x > 0.0 && ndigits < 1100) {
        x += x;
        const bool b = x >= 1.0;
        if (b) x -= 1.0;
        digits[ndigits++] = b;
    }
    for (auto& out : words) {
        uint64_t undecided = ~uint64_t{0};
        uint64_t result = 0;
        for (int d = 0; d < ndigits && undecided; ++d) {
            const uint64_t w = rng.next();
            if (digits[d]) {
                result |= undecided & ~w;
                undecided &= w;
            } else {
                undecided &= ~w;
            }
        }
        // Lanes still undecided matched every digit of p, i.e. u >= p.
        out = result;
    }
}

} // namespace detail

TestDesign generate_design(int n, int T, double p, uint64_t seed, std::size_t max_cells) {
    if (n < 1) throw std::domain_error("generate_design: n must be >= 1");
    if (T < 0) throw std::domain_error("generate_design: T must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("generate_design: p outside [0,1]");
    if (static_cast<std::size_t>(n) * static_cast<std::size_t>(T) > max_cells)
        throw std::length_error("generate_design: n*T exceeds the design cell budget");

    TestDesign design(n, T, p, seed);
    Xoshiro256StarStar rng(seed);
    detail::fill_bernoulli_words(std::span<uint64_t>(design.bits_), p, rng);
    // Clear the padding bits past item n-1 in every row.
    const int rem = n & 63;
    if (rem != 0) {
        const uint64_t tail_mask = (uint64_t{1} << rem) - 1;
        for (int t = 0; t < T; ++t) design.row(t).back() &= tail_mask;
    }
    return design;
}

DefectiveSet sample_defective_set(int n, int k, uint64_t seed) {
    if (k < 0 || k > n) throw std::domain_error("sample_defective_set: need 0 <= k <= n");
    Xoshiro256StarStar rng(seed);
    // Floyd's uniform k-subset sampler.
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    for (int j = n - k; j < n; ++j) {
        const int t = static_cast<int>(rng.next_below(static_cast<uint64_t>(j) + 1));
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end())
            chosen.push_back(j);
        else
            chosen.push_back(t);
    }
    std::sort(chosen.begin(), chosen.end());
    return DefectiveSet(std::move(chosen));
}

OutcomeVector run_tests(const TestDesign& design, const DefectiveSet& defectives) {
    const BitVec mask = defectives.to_mask(design.items());
    OutcomeVector y(design.tests());
    for (int t = 0; t < design.tests(); ++t) {
        if (words_intersect(design.row(t), mask.words())) y.bits.set(static_cast<std::size_t>(t));
    }
    return y;
}

bool is_satisfying(const TestDesign& design, const OutcomeVector& y,
                   const DefectiveSet& candidate) {
    if (y.tests() != design.tests())
        throw std::invalid_argument("is_satisfying: outcome length != design tests");
    const BitVec mask = candidate.to_mask(design.items());
    for (int t = 0; t < design.tests(); ++t) {
        if (words_intersect(design.row(t), mask.words()) != y.positive(t)) return false;
    }
    return true;
}

} // namespace berngt
