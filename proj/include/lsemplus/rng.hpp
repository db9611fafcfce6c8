#pragma once

#include <cstdint>
#include <random>

namespace lsemplus {

/// Seeded generator used by every stochastic routine. Callers own it.
using Rng = std::mt19937_64;

/// Uniform draw on [0, 1) built from the top 53 bits of one engine output.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// splitmix64 finaliser; derives independent sub-stream seeds from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace lsemplus
