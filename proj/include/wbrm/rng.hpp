#pragma once

#include <cmath>
#include <cstdint>

namespace wbrm {

// Counter-based generator: every value is a pure function of (seed, counter),
// so parallel generation is order-independent and bit-reproducible.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derive a per-stream key from a seed and a counter.
inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(seed ^ splitmix64(counter));
}

/// Uniform in the open interval (0, 1).
inline double uniform_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw addressed by (seed, counter); Box-Muller on two
/// counter-derived uniforms.
inline double normal_at(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t key = derive_key(seed, counter);
    const double u1 = uniform_open(splitmix64(key));
    const double u2 = uniform_open(splitmix64(key ^ 0xD1B54A32D192ED03ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
}

/// Uniform (0,1) addressed by (seed, counter).
inline double uniform_at(std::uint64_t seed, std::uint64_t counter) {
    return uniform_open(splitmix64(derive_key(seed, counter)));
}

/// Small sequential generator for places where a stream is more natural
/// than a counter (test helpers, sampling without replacement).
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double next_uniform() { return uniform_open(next_u64()); }

    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925 * u2);
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

}  // namespace wbrm
