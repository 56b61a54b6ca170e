#pragma once

#include <cstdint>

namespace mlpbench {

/// SplitMix64 generator. Every random quantity in the project (initial weights, synthetic
/// inputs) is drawn from this so that other implementations can reproduce them bit for bit.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Top 53 bits scaled into [0, 1).
    constexpr double next_unit() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    constexpr double next_uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t state_;
};

}  // namespace mlpbench
