#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "berngt/design.hpp"

namespace berngt {

struct EnumerationCaps {
    int max_n_unrestricted = 16;
    int max_n_fixed_k = 30;
    uint64_t max_fixed_k_subsets = 10'000'000;
};

/// Every satisfying set for one (design, outcome) instance, enumerated in
/// colexicographic order. With size_filter set, only size-k sets are
/// listed and d counts them (the proof's d(y)).
struct SatisfyingFamily {
    std::vector<DefectiveSet> sets;
    std::optional<int> size_filter;
    uint64_t d = 0;
};

/// Exhaustive enumeration; throws std::length_error past the caps.
SatisfyingFamily enumerate_satisfying(const TestDesign& design, const OutcomeVector& y,
                                      std::optional<int> k = std::nullopt,
                                      const EnumerationCaps& caps = {});

/// 1/d: no decoder can beat this success probability at a fixed outcome.
double posterior_success_bound(const SatisfyingFamily& family);

/// Concrete check of the counting step behind the converse: if SSS
/// undershoots and COMP overshoots k, at least two size-k satisfying sets
/// must exist.
struct SandwichReport {
    int sss_size = 0;
    int comp_size = 0;
    bool premise = false;       // |SSS| < k and |COMP| > k
    uint64_t size_k_count = 0;  // d(y) at size k
    bool holds = true;          // premise -> size_k_count >= 2
    std::vector<DefectiveSet> witnesses;
};

SandwichReport verify_sandwich_argument(const TestDesign& design, const OutcomeVector& y,
                                        int k, const EnumerationCaps& caps = {});

} // namespace berngt
