#ifndef RIDGELINE_RNG_HPP
#define RIDGELINE_RNG_HPP

#include <cstdint>

namespace ridgeline {

// Counter-based splittable generator (splitmix64 finalizer). Stateless:
// value(seed, i) is a pure function, so streams are reproducible across
// platforms and trivially splittable by counter range.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) from the top 53 bits of the mixed counter.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = splitmix64(seed ^ splitmix64(counter));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform double in [-half_width, half_width].
inline double uniform_symmetric(std::uint64_t seed, std::uint64_t counter, double half_width) {
    return half_width * (2.0 * uniform01(seed, counter) - 1.0);
}

} // namespace ridgeline

#endif
