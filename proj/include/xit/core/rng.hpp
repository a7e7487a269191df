#pragma once

#include <array>
#include <cstdint>

namespace xit {

/// SplitMix64 step. Used to expand a 64-bit seed into generator state and as
/// the finalizer for derived job seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** seeded through SplitMix64.
///
/// The stream is advanced only by next_u64(), uniform_below() and
/// uniform_unit(); every transform documents the order in which it calls
/// them, so identical seeds give identical outputs on every platform.
/// Single-owner: do not share one instance between threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
    /// bound must be > 0.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform_unit();

    std::uint64_t seed() const { return seed_; }

private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_;
};

inline Rng seed_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace xit
