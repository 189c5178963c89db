#pragma once

#include <array>
#include <cstdint>

namespace berngt {

// All randomness in this project flows through the two generators below.
// They are fixed algorithms with published constants, so any (seed, stream)
// pair reproduces the same draws on every platform and compiler:
//   - splitmix64 (Steele, Lea, Flood 2014) for seeding and stream derivation
//   - xoshiro256** 1.0 (Blackman, Vigna 2018) as the bulk generator

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) via Lemire's multiply-shift with rejection.
    uint64_t next_below(uint64_t bound) {
        uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        uint64_t lo = static_cast<uint64_t>(m);
        if (lo < bound) {
            const uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                x = next();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<uint64_t, 4> s_;
};

/// Purpose tags keeping the per-trial design and defective-set streams apart.
enum class SeedPurpose : uint64_t {
    design = 1,
    defectives = 2,
    instance = 3,
};

/// Derives an independent stream seed from (master, purpose, index) by
/// chaining the splitmix64 finalizer. Same inputs give the same stream
/// everywhere; distinct inputs give statistically independent streams.
inline uint64_t derive_seed(uint64_t master, SeedPurpose purpose, uint64_t index) {
    SplitMix64 sm(master);
    uint64_t x = sm.next();
    sm.state = x ^ (static_cast<uint64_t>(purpose) * 0xA24BAED4963EE407ull);
    x = sm.next();
    sm.state = x ^ (index * 0x9FB21C651E98DF25ull);
    return sm.next();
}

} // namespace berngt
