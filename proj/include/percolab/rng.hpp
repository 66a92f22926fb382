#pragma once

#include <cstdint>
#include <random>

namespace percolab {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic per-trial seed: trials are reproducible and independent of
// scheduling, so sweeps can run on any number of workers.
inline std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x9E3779B97F4A7C15ULL);
}

inline Rng make_trial_rng(std::uint64_t master_seed, std::uint64_t stream) {
    return Rng(derive_trial_seed(master_seed, stream));
}

// Unbiased uniform draw from {0, ..., bound-1}; portable (no distribution
// objects) so seeded runs reproduce across standard library versions.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    // Lemire's multiply-shift rejection method.
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        while (lo < threshold) {
            x = rng();
            m = static_cast<__uint128_t>(x) * bound;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform_unit(rng) < p;
}

}  // namespace percolab
