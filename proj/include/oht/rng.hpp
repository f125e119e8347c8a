#pragma once

#include <cstdint>

namespace oht {

// SplitMix64 finalizer: bijective 64-bit mix with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based SplitMix64. Output i of a stream is a pure function of
// (seed, i), so streams support O(1) random access and are reproducible
// across platforms and thread schedules.
struct SplitMix64 {
    std::uint64_t state = 0;

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    std::uint64_t next() {
        state += kGamma;
        return mix64(state);
    }

    // Output at stream position i without advancing any state.
    static std::uint64_t at(std::uint64_t seed, std::uint64_t i) {
        return mix64(seed + (i + 1) * kGamma);
    }
};

// Deterministic seed for one (base_seed, trial, sequence) triple.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial, std::uint64_t seq) {
    std::uint64_t h = mix64(base_seed + 0x6A09E667F3BCC909ull);
    h = mix64(h ^ (trial + 0xBB67AE8584CAA73Bull));
    h = mix64(h ^ (seq + 0x3C6EF372FE94F82Bull));
    return h;
}

// Uniform double in [0, 1) with 53 random bits.
inline double to_unit(std::uint64_t r) {
    return static_cast<double>(r >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n) via the 128-bit multiply trick (no floating point,
// negligible bias for the n used here).
inline std::uint32_t uniform_index(std::uint64_t r, std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(r) * n) >> 64);
}

}  // namespace oht
