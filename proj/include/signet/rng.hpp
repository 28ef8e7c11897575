#pragma once

// Deterministic random draws. mt19937_64 has a standard-pinned output
// sequence, so every platform and compiler sees the same stream for a
// given seed. Distribution helpers are hand-rolled because std::uniform_*
// distributions are not pinned across standard library implementations.

#include <cstdint>
#include <random>

namespace signet {

// Stream tags: xor'ed onto a user seed so two draws that share one run seed
// (graph magnitudes, initial state) never consume the same mt19937_64 stream.
inline constexpr std::uint64_t kWeightStreamTag = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kInitStreamTag = 0x517cc1b727220a95ULL;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on [lo, hi], both ends inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace signet
