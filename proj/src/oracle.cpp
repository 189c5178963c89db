#include "berngt/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "berngt/decoders.hpp"
#include "berngt/rates.hpp"

namespace berngt {

namespace {

DefectiveSet set_from_bits(uint64_t bits) {
    std::vector<int> items;
    while (bits) {
        items.push_back(std::countr_zero(bits));
        bits &= bits - 1;
    }
    return DefectiveSet(std::move(items));
}

// Enumeration caps keep n <= 64, so a candidate set is one word.
bool mask_satisfies(const TestDesign& design, const OutcomeVector& y, uint64_t bits) {
    for (int t = 0; t < design.tests(); ++t) {
        if (((design.row(t)[0] & bits) != 0) != y.positive(t)) return false;
    }
    return true;
}

} // namespace

SatisfyingFamily enumerate_satisfying(const TestDesign& design, const OutcomeVector& y,
                                      std::optional<int> k, const EnumerationCaps& caps) {
    const int n = design.items();
    SatisfyingFamily family;
    family.size_filter = k;

    if (!k.has_value()) {
        if (n > caps.max_n_unrestricted)
            throw std::length_error("enumerate_satisfying: n above unrestricted cap");
        // Increasing masks are exactly colexicographic subset order.
        for (uint64_t bits = 0; bits < (uint64_t{1} << n); ++bits) {
            if (mask_satisfies(design, y, bits)) family.sets.push_back(set_from_bits(bits));
        }
        family.d = family.sets.size();
        return family;
    }

    const int kk = *k;
    if (kk < 0 || kk > n) throw std::domain_error("enumerate_satisfying: k outside [0,n]");
    if (n > caps.max_n_fixed_k)
        throw std::length_error("enumerate_satisfying: n above fixed-k cap");
    const double subsets = std::exp2(log_binom(n, kk));
    if (subsets > static_cast<double>(caps.max_fixed_k_subsets))
        throw std::length_error("enumerate_satisfying: C(n,k) above subset cap");

    if (kk == 0) {
        if (mask_satisfies(design, y, 0)) family.sets.push_back(DefectiveSet{});
        family.d = family.sets.size();
        return family;
    }
    // Gosper's hack walks same-popcount masks in increasing (colex) order.
    uint64_t bits = (uint64_t{1} << kk) - 1;
    const uint64_t limit = uint64_t{1} << n;
    while (bits < limit) {
        if (mask_satisfies(design, y, bits)) family.sets.push_back(set_from_bits(bits));
        const uint64_t c = bits & (0 - bits);
        const uint64_t r = bits + c;
        if (r >= limit) break;
        bits = (((r ^ bits) >> 2) / c) | r;
    }
    family.d = family.sets.size();
    return family;
}

double posterior_success_bound(const SatisfyingFamily& family) {
    if (family.d == 0) throw std::invalid_argument("posterior_success_bound: empty family");
    return 1.0 / static_cast<double>(family.d);
}

SandwichReport verify_sandwich_argument(const TestDesign& design, const OutcomeVector& y,
                                        int k, const EnumerationCaps& caps) {
    SandwichReport report;
    report.comp_size = comp_decode(design, y).size();
    report.sss_size = sss_decode(design, y).result.size();
    report.premise = report.sss_size < k && report.comp_size > k;

    const SatisfyingFamily family = enumerate_satisfying(design, y, k, caps);
    report.size_k_count = family.d;
    if (report.premise) {
        report.holds = family.d >= 2;
        for (std::size_t i = 0; i < family.sets.size() && i < 2; ++i)
            report.witnesses.push_back(family.sets[i]);
    }
    return report;
}

} // namespace berngt
