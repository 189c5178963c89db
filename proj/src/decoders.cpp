#include "berngt/decoders.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace berngt {

namespace {

/// Items ruled out by appearing in some negative test.
BitVec eliminated_mask(const TestDesign& design, const OutcomeVector& y) {
    BitVec eliminated(static_cast<std::size_t>(design.items()));
    for (int t = 0; t < design.tests(); ++t) {
        if (!y.positive(t)) eliminated.or_with(design.row(t));
    }
    return eliminated;
}

BitVec possible_defectives(const TestDesign& design, const OutcomeVector& y) {
    BitVec pd = eliminated_mask(design, y);
    pd.flip_all();
    return pd;
}

int intersection_size_capped(std::span<const uint64_t> row, const BitVec& mask, int cap) {
    int c = 0;
    for (std::size_t w = 0; w < row.size(); ++w) {
        c += std::popcount(row[w] & mask.words()[w]);
        if (c > cap) return c;
    }
    return c;
}

void check_dims(const TestDesign& design, const OutcomeVector& y) {
    if (y.tests() != design.tests())
        throw std::invalid_argument("decoder: outcome length != design tests");
}

/// Exact minimum set cover by depth-first branch and bound. Constraints
/// are candidate masks over at most 64 items; every constraint must end
/// up intersecting the chosen mask.
class CoverSearch {
public:
    CoverSearch(std::vector<uint64_t> constraints, uint64_t budget)
        : constraints_(std::move(constraints)), budget_(budget) {}

    void run() { dfs(0, 0, 0); }

    int best_size() const { return best_size_; }
    uint64_t best_mask() const { return best_mask_; }
    bool found_second() const { return found_second_; }
    bool truncated() const { return truncated_; }
    uint64_t nodes() const { return nodes_; }

private:
    /// Count of pairwise-disjoint uncovered constraints: each needs its
    /// own item, so this is a valid lower bound on the remaining picks.
    int lower_bound(uint64_t chosen, uint64_t banned) const {
        uint64_t used = 0;
        int lb = 0;
        for (uint64_t c : constraints_) {
            if (c & chosen) continue;
            const uint64_t avail = c & ~banned;
            if ((avail & used) == 0) {
                ++lb;
                used |= avail;
            }
        }
        return lb;
    }

    void record(uint64_t chosen, int count) {
        if (count < best_size_) {
            best_size_ = count;
            best_mask_ = chosen;
            found_second_ = false;
        } else if (count == best_size_ && chosen != best_mask_) {
            found_second_ = true;
        }
    }

    void dfs(uint64_t chosen, int count, uint64_t banned) {
        if (truncated_) return;
        if (++nodes_ > budget_) {
            truncated_ = true;
            return;
        }

        // Branch on the uncovered constraint with the fewest available
        // candidates; ties resolve to the earliest constraint.
        int pick = -1;
        int pick_width = INT_MAX;
        for (std::size_t i = 0; i < constraints_.size(); ++i) {
            const uint64_t c = constraints_[i];
            if (c & chosen) continue;
            const int width = std::popcount(c & ~banned);
            if (width == 0) return;  // dead branch, a constraint lost all candidates
            if (width < pick_width) {
                pick_width = width;
                pick = static_cast<int>(i);
            }
        }
        if (pick < 0) {
            record(chosen, count);
            return;
        }

        // Ties at the incumbent size matter until a second solution is
        // seen, after that only strictly smaller covers do.
        const int slack = found_second_ ? best_size_ - 1 : best_size_;
        if (count + lower_bound(chosen, banned) > slack) return;

        uint64_t avail = constraints_[pick] & ~banned;
        uint64_t local_banned = banned;
        while (avail) {
            const uint64_t bit = avail & (0 - avail);
            avail ^= bit;
            dfs(chosen | bit, count + 1, local_banned);
            if (truncated_) return;
            // Later branches must exclude this candidate so each cover is
            // enumerated exactly once.
            local_banned |= bit;
        }
    }

    std::vector<uint64_t> constraints_;
    uint64_t budget_;
    uint64_t nodes_ = 0;
    int best_size_ = INT_MAX;
    uint64_t best_mask_ = 0;
    bool found_second_ = false;
    bool truncated_ = false;
};

} // namespace

DecodeResult comp_decode(const TestDesign& design, const OutcomeVector& y) {
    check_dims(design, y);
    DecodeResult out;
    out.algorithm = Algorithm::comp;
    out.estimate = DefectiveSet::from_mask(possible_defectives(design, y));
    return out;
}

DecodeResult dd_decode(const TestDesign& design, const OutcomeVector& y) {
    check_dims(design, y);
    const BitVec pd = possible_defectives(design, y);
    BitVec definite(static_cast<std::size_t>(design.items()));
    for (int t = 0; t < design.tests(); ++t) {
        if (!y.positive(t)) continue;
        if (intersection_size_capped(design.row(t), pd, 1) != 1) continue;
        for (std::size_t w = 0; w < pd.word_count(); ++w) {
            const uint64_t x = design.row(t)[w] & pd.words()[w];
            if (x) {
                definite.words()[w] |= x;
                break;
            }
        }
    }
    DecodeResult out;
    out.algorithm = Algorithm::dd;
    out.estimate = DefectiveSet::from_mask(definite);
    return out;
}

DecodeResult scomp_decode(const TestDesign& design, const OutcomeVector& y) {
    check_dims(design, y);
    const BitVec pd = possible_defectives(design, y);
    BitVec chosen = dd_decode(design, y).estimate.to_mask(design.items());

    std::vector<int> uncovered;
    for (int t = 0; t < design.tests(); ++t) {
        if (y.positive(t) && !words_intersect(design.row(t), chosen.words()))
            uncovered.push_back(t);
    }

    std::vector<int> coverage(static_cast<std::size_t>(design.items()));
    while (!uncovered.empty()) {
        std::fill(coverage.begin(), coverage.end(), 0);
        for (int t : uncovered) {
            for (std::size_t w = 0; w < pd.word_count(); ++w) {
                uint64_t x = design.row(t)[w] & pd.words()[w];
                while (x) {
                    const int item = static_cast<int>(w * 64 + std::countr_zero(x));
                    x &= x - 1;
                    ++coverage[static_cast<std::size_t>(item)];
                }
            }
        }
        int best_item = -1;
        int best_cover = 0;
        for (int i = 0; i < design.items(); ++i) {
            if (coverage[static_cast<std::size_t>(i)] > best_cover && !chosen.test(static_cast<std::size_t>(i))) {
                best_cover = coverage[static_cast<std::size_t>(i)];
                best_item = i;
            }
        }
        if (best_item < 0)
            throw std::invalid_argument("scomp_decode: positive test with no possible defectives");
        chosen.set(static_cast<std::size_t>(best_item));
        std::erase_if(uncovered, [&](int t) {
            return design.includes(best_item, t);
        });
    }

    DecodeResult out;
    out.algorithm = Algorithm::scomp;
    out.estimate = DefectiveSet::from_mask(chosen);
    return out;
}

SssResult sss_decode(const TestDesign& design, const OutcomeVector& y, uint64_t node_budget) {
    check_dims(design, y);
    const BitVec pd = possible_defectives(design, y);
    const std::vector<int> candidates = pd.to_indices();
    if (candidates.size() > 64)
        throw std::domain_error("sss_decode: more than 64 possible defectives");

    // Remap possible defectives to bit positions 0..m-1 and express each
    // positive test as the mask of candidates that could explain it.
    std::vector<int> position(static_cast<std::size_t>(design.items()), -1);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        position[static_cast<std::size_t>(candidates[i])] = static_cast<int>(i);

    std::vector<uint64_t> constraints;
    constraints.reserve(static_cast<std::size_t>(y.positive_count()));
    for (int t = 0; t < design.tests(); ++t) {
        if (!y.positive(t)) continue;
        uint64_t mask = 0;
        for (std::size_t w = 0; w < pd.word_count(); ++w) {
            uint64_t x = design.row(t)[w] & pd.words()[w];
            while (x) {
                const int item = static_cast<int>(w * 64 + std::countr_zero(x));
                x &= x - 1;
                mask |= uint64_t{1} << position[static_cast<std::size_t>(item)];
            }
        }
        if (mask == 0)
            throw std::invalid_argument("sss_decode: no satisfying set exists for this outcome");
        constraints.push_back(mask);
    }

    // Implied constraints (supersets of another) never change the feasible
    // covers, so dropping them is safe for uniqueness too.
    std::sort(constraints.begin(), constraints.end(),
              [](uint64_t a, uint64_t b) { return std::popcount(a) < std::popcount(b); });
    std::vector<uint64_t> reduced;
    for (uint64_t c : constraints) {
        bool implied = false;
        for (uint64_t r : reduced) {
            if ((r & ~c) == 0) { implied = true; break; }
        }
        if (!implied) reduced.push_back(c);
    }

    CoverSearch search(std::move(reduced), node_budget);
    search.run();

    SssResult out;
    out.nodes = search.nodes();
    out.result.algorithm = Algorithm::sss;
    out.status = search.truncated() ? SssStatus::truncated : SssStatus::exact;

    std::vector<int> items;
    if (search.best_size() != INT_MAX) {
        uint64_t mask = search.best_mask();
        while (mask) {
            items.push_back(candidates[static_cast<std::size_t>(std::countr_zero(mask))]);
            mask &= mask - 1;
        }
        std::sort(items.begin(), items.end());
    }
    out.result.estimate = DefectiveSet(std::move(items));
    out.result.unique = out.status == SssStatus::truncated
                            ? Uniqueness::unknown
                            : (search.found_second() ? Uniqueness::not_unique : Uniqueness::unique);
    return out;
}

bool sole_defective_indicator(const TestDesign& design, const DefectiveSet& defectives) {
    if (defectives.items.empty()) return true;
    const BitVec kmask = defectives.to_mask(design.items());
    BitVec pending = kmask;  // defectives not yet seen as a test's only defective
    std::size_t remaining = defectives.items.size();
    for (int t = 0; t < design.tests() && remaining > 0; ++t) {
        const auto row = design.row(t);
        int count = 0;
        std::size_t hit_word = 0;
        uint64_t hit_bits = 0;
        for (std::size_t w = 0; w < row.size(); ++w) {
            const uint64_t x = row[w] & kmask.words()[w];
            if (x) {
                count += std::popcount(x);
                if (count > 1) break;
                hit_word = w;
                hit_bits = x;
            }
        }
        if (count == 1 && (pending.words()[hit_word] & hit_bits)) {
            pending.words()[hit_word] &= ~hit_bits;
            --remaining;
        }
    }
    return remaining == 0;
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::comp: return "comp";
        case Algorithm::dd: return "dd";
        case Algorithm::scomp: return "scomp";
        case Algorithm::sss: return "sss";
    }
    return "unknown";
}

} // namespace berngt
