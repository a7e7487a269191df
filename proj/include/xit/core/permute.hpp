#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "xit/core/rng.hpp"

namespace xit {

/// In-place Fisher–Yates. Draws uniform_below(i + 1) for i = n-1 down to 1,
/// so an n-element shuffle consumes exactly n-1 integer draws.
template <class T>
void fisher_yates_shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_below(i));
        using std::swap;
        swap(items[i - 1], items[j]);
    }
}

template <class T>
std::vector<T> fisher_yates_permute(std::vector<T> items, Rng& rng) {
    fisher_yates_shuffle(std::span<T>(items), rng);
    return items;
}

/// Uniform permutation of 0..n-1.
inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    fisher_yates_shuffle(std::span<std::size_t>(perm), rng);
    return perm;
}

}  // namespace xit
