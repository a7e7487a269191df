#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xit/core/image.hpp"
#include "xit/core/rng.hpp"

namespace xit {

/// Channel-separated planar copy of an image (Color Flatten output).
struct FlattenedImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> channel_r;
    std::vector<std::uint8_t> channel_g;
    std::vector<std::uint8_t> channel_b;

    friend bool operator==(const FlattenedImage&, const FlattenedImage&) = default;
};

/// Select-then-permute over `positions` (pixel indices into `pixels`, in the
/// order they are visited). One uniform_unit() draw per position decides
/// membership (u < p); the selected values are then Fisher–Yates permuted and
/// written back to the selected positions in visiting order.
void shuffle_selected(std::span<Rgb> pixels, std::span<const std::size_t> positions, double p,
                      Rng& rng);

/// Every pixel enters the permuted set independently with probability p;
/// unselected pixels never move.
ImageBuffer full_random_shuffle(const ImageBuffer& img, double p, Rng& rng);

/// Permutes whole block×block tiles (row-major tile indices, one Fisher–Yates
/// over tiles). Throws InvalidArgument if block does not divide both sides.
ImageBuffer grid_shuffle(const ImageBuffer& img, int block, Rng& rng);

/// full_random_shuffle applied independently inside each tile, tiles visited
/// in row-major order; tiles stay in place.
ImageBuffer within_grid_shuffle(const ImageBuffer& img, int block, double p, Rng& rng);

/// within_grid_shuffle followed by grid_shuffle on the same stream.
ImageBuffer local_structure_shuffle(const ImageBuffer& img, int block, double p, Rng& rng);

FlattenedImage color_flatten(const ImageBuffer& img);

/// Inverse of color_flatten.
ImageBuffer unflatten(const FlattenedImage& flat);

/// Display form of a flattened image: the R, G and B planes are concatenated
/// and the resulting byte string is read back as interleaved RGB triplets in a
/// width×height frame.
ImageBuffer render_flattened(const FlattenedImage& flat);

/// Throws InvalidArgument("block size must divide image dimensions") unless
/// block > 0 divides both sides.
void check_block_divides(const ImageBuffer& img, int block);

}  // namespace xit
