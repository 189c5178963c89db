#pragma once

#include <cstdint>
#include <string>

#include "berngt/design.hpp"

namespace berngt {

enum class Algorithm { comp, dd, scomp, sss };

enum class Uniqueness { unique, not_unique, unknown };

struct DecodeResult {
    DefectiveSet estimate;
    Algorithm algorithm;
    Uniqueness unique = Uniqueness::unknown;

    int size() const { return estimate.size(); }
    bool has_size(int k) const { return estimate.size() == k; }
};

/// COMP: every item seen in a negative test is nondefective, everything
/// else is declared defective. The estimate is the unique largest
/// satisfying set and always contains the true defectives.
DecodeResult comp_decode(const TestDesign& design, const OutcomeVector& y);

/// DD: restrict to COMP's possible defectives, then declare exactly the
/// items that are the sole possible defective in some positive test.
/// Never produces a false positive in the noiseless model.
DecodeResult dd_decode(const TestDesign& design, const OutcomeVector& y);

/// SCOMP: DD's definite defectives, greedily extended by the possible
/// defective covering the most uncovered positive tests until every
/// positive test is covered. Ties break on the lowest item index.
DecodeResult scomp_decode(const TestDesign& design, const OutcomeVector& y);

enum class SssStatus { exact, truncated };

struct SssResult {
    DecodeResult result;
    SssStatus status = SssStatus::exact;
    uint64_t nodes = 0;
};

inline constexpr uint64_t kDefaultSssNodeBudget = 20'000'000;

/// SSS: a minimum-cardinality satisfying set, found exactly by
/// branch-and-bound over set cover restricted to COMP's possible
/// defectives. `unique` reports whether a second distinct minimum-size
/// satisfying set exists. When the node budget runs out the best
/// incumbent is returned with status `truncated` and uniqueness unknown,
/// so callers never confuse exact and truncated answers.
/// Requires at most 64 possible defectives (desk-scale instances).
SssResult sss_decode(const TestDesign& design, const OutcomeVector& y,
                     uint64_t node_budget = kDefaultSssNodeBudget);

/// True iff every defective is the only defective in at least one test,
/// the necessary condition for SSS to return a size-k set.
bool sole_defective_indicator(const TestDesign& design, const DefectiveSet& defectives);

std::string to_string(Algorithm a);

} // namespace berngt
