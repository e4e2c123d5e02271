#pragma once

#include <cstdint>
#include <random>

namespace schiffer::detail {

// Uniform double in [0, 1) built directly from the generator output so
// results do not depend on the standard library's distribution
// implementation.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Standard normal via Box-Muller on the portable uniform above.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = 0.0;
    do {
        u1 = uniform01(rng);
    } while (u1 <= 0.0);
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925287 * u2);
}

} // namespace schiffer::detail
