#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace dacml {

/// Engine used everywhere. Draws go through the helpers below instead of
/// <random> distributions so streams are identical across standard libraries.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept {
    return mix_seed(base ^ mix_seed(salt));
}

/// Uniform double in [0, 1) with 53 random bits.
[[nodiscard]] inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Rejection sampling, no modulo bias.
[[nodiscard]] inline std::size_t uniform_index(Rng &rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = Rng::max() - Rng::max() % bound;
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    return static_cast<std::size_t>(draw % bound);
}

[[nodiscard]] inline bool bernoulli(Rng &rng, double p) { return uniform01(rng) < p; }

} // namespace dacml
