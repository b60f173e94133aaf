#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace graphdr {

/// Deterministic 64-bit generator. The core stream is splitmix64
/// (Steele, Lea & Flood 2014): a fixed-increment Weyl sequence passed
/// through a shift/multiply finalizer. The stream is pinned: golden tests
/// depend on it, so the constants below must never change.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Unbiased integer in [0, bound) by rejection on the top range.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t v = next_u64();
        while (v > limit) v = next_u64();
        return v % bound;
    }

    /// Standard normal via Box-Muller; consumes two uniforms per draw.
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    /// Independent child stream for a labelled purpose.
    Rng fork(std::uint64_t stream) {
        return Rng(next_u64() ^ (0xA3EC647659359ACDULL * (stream + 1)));
    }

private:
    std::uint64_t state_;
};

}  // namespace graphdr
