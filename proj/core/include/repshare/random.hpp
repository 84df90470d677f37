#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace repshare {

// Draw mappings are hand-rolled on top of mt19937_64 because the standard
// distributions are implementation-defined; this keeps seeded runs
// reproducible across compilers and standard libraries.

/// Uniform double in [0, 1).
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

/// Gaussian via Box-Muller, one draw per call (no cached spare).
inline double gaussian(std::mt19937_64& gen, double mean, double sigma) {
    const double u1 = 1.0 - uniform01(gen);  // (0, 1], keeps log finite
    const double u2 = uniform01(gen);
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
}

/// splitmix64 finalizer, used to derive independent per-round seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace repshare
