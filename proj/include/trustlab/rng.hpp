#pragma once

#include <cstdint>

namespace trustlab {

/// Pinned pseudo-random generator: SplitMix64 (Steele, Lea & Flood 2014).
/// Chosen for bit-identical output on every platform; all simulation and
/// randomized-test sampling flows through this generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) using the top 53 bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Stream splitting: per-trial seed derived from (master seed, trial index),
/// so trial results are independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 mix(master ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    mix.next();
    return mix.next();
}

} // namespace trustlab
