#pragma once

#include <cstdint>

namespace penrose {

/// Counter-based 64-bit generator (SplitMix64). The whole state is one
/// counter, so streams are cheap to derive and fully reproducible across
/// platforms; no libstdc++ distribution is used anywhere, all draws are
/// specified here bit for bit.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    /// Independent, reproducible stream for item `index` of a batch keyed by
    /// `master`. Used for per-walk seeding.
    static Rng stream(uint64_t master, uint64_t index) {
        return Rng(mix(master + 0x9E3779B97F4A7C15ULL * (index + 1)));
    }

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, n). Lemire rejection.
    uint64_t uniform_below(uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            const uint64_t threshold = (0ULL - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    /// Top-two-bits draw from {0,1,2,3}; the hot path of the walk.
    uint32_t next_quarter() { return static_cast<uint32_t>(next_u64() >> 62); }

    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

private:
    uint64_t state_;
};

}  // namespace penrose
