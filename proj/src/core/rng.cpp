#include "xit/core/rng.hpp"

#include <stdexcept>

namespace xit {
namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) {
        word = splitmix64(sm);
    }
    // SplitMix64 never yields four zero words in a row, but the all-zero
    // state is a fixed point of xoshiro, so guard it anyway.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = 1;
    }
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform_below: bound must be positive");
    }
    // Values below `threshold` would over-represent the low residues.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

double Rng::uniform_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace xit
