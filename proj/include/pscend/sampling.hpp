#pragma once

#include <random>

namespace pscend {

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
/// Unlike std::uniform_real_distribution this is the same on every standard
/// library, which the seeded sweeps rely on.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace pscend
