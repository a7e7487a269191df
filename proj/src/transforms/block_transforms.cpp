#include "xit/transforms/block_transforms.hpp"

#include <string>

#include "xit/core/error.hpp"
#include "xit/core/permute.hpp"

namespace xit {
namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("shuffle probability must lie in [0, 1]");
    }
}

// Row-major pixel indices of tile (tx, ty).
std::vector<std::size_t> tile_positions(const ImageBuffer& img, int block, int tx, int ty) {
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(block) * static_cast<std::size_t>(block));
    for (int y = ty * block; y < (ty + 1) * block; ++y) {
        for (int x = tx * block; x < (tx + 1) * block; ++x) {
            out.push_back(img.index(x, y));
        }
    }
    return out;
}

}  // namespace

void check_block_divides(const ImageBuffer& img, int block) {
    if (block <= 0 || img.width() % block != 0 || img.height() % block != 0) {
        throw InvalidArgument("block size must divide image dimensions (block " +
                              std::to_string(block) + ", image " + std::to_string(img.width()) +
                              "x" + std::to_string(img.height()) + ")");
    }
}

void shuffle_selected(std::span<Rgb> pixels, std::span<const std::size_t> positions, double p,
                      Rng& rng) {
    std::vector<std::size_t> selected;
    selected.reserve(positions.size());
    for (const auto pos : positions) {
        if (rng.uniform_unit() < p) {
            selected.push_back(pos);
        }
    }
    std::vector<Rgb> values;
    values.reserve(selected.size());
    for (const auto pos : selected) {
        values.push_back(pixels[pos]);
    }
    fisher_yates_shuffle(std::span<Rgb>(values), rng);
    for (std::size_t i = 0; i < selected.size(); ++i) {
        pixels[selected[i]] = values[i];
    }
}

ImageBuffer full_random_shuffle(const ImageBuffer& img, double p, Rng& rng) {
    check_probability(p);
    ImageBuffer out = img;
    std::vector<std::size_t> positions(img.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        positions[i] = i;
    }
    shuffle_selected(out.pixels(), positions, p, rng);
    return out;
}

ImageBuffer grid_shuffle(const ImageBuffer& img, int block, Rng& rng) {
    check_block_divides(img, block);
    const int tiles_x = img.width() / block;
    const int tiles_y = img.height() / block;
    const auto perm = random_permutation(static_cast<std::size_t>(tiles_x) * tiles_y, rng);

    ImageBuffer out(img.width(), img.height());
    for (std::size_t dst = 0; dst < perm.size(); ++dst) {
        const int dx = static_cast<int>(dst) % tiles_x;
        const int dy = static_cast<int>(dst) / tiles_x;
        const int sx = static_cast<int>(perm[dst]) % tiles_x;
        const int sy = static_cast<int>(perm[dst]) / tiles_x;
        for (int y = 0; y < block; ++y) {
            for (int x = 0; x < block; ++x) {
                out.at(dx * block + x, dy * block + y) = img.at(sx * block + x, sy * block + y);
            }
        }
    }
    return out;
}

ImageBuffer within_grid_shuffle(const ImageBuffer& img, int block, double p, Rng& rng) {
    check_block_divides(img, block);
    check_probability(p);
    ImageBuffer out = img;
    for (int ty = 0; ty < img.height() / block; ++ty) {
        for (int tx = 0; tx < img.width() / block; ++tx) {
            shuffle_selected(out.pixels(), tile_positions(img, block, tx, ty), p, rng);
        }
    }
    return out;
}

ImageBuffer local_structure_shuffle(const ImageBuffer& img, int block, double p, Rng& rng) {
    const ImageBuffer shuffled = within_grid_shuffle(img, block, p, rng);
    return grid_shuffle(shuffled, block, rng);
}

FlattenedImage color_flatten(const ImageBuffer& img) {
    FlattenedImage flat;
    flat.width = img.width();
    flat.height = img.height();
    flat.channel_r.reserve(img.size());
    flat.channel_g.reserve(img.size());
    flat.channel_b.reserve(img.size());
    for (const Rgb& px : img.pixels()) {
        flat.channel_r.push_back(px.r);
        flat.channel_g.push_back(px.g);
        flat.channel_b.push_back(px.b);
    }
    return flat;
}

namespace {

void check_flat(const FlattenedImage& flat) {
    const auto n = static_cast<std::size_t>(flat.width) * static_cast<std::size_t>(flat.height);
    if (flat.width <= 0 || flat.height <= 0 || flat.channel_r.size() != n ||
        flat.channel_g.size() != n || flat.channel_b.size() != n) {
        throw InvalidArgument("flattened image channels do not match its dimensions");
    }
}

}  // namespace

ImageBuffer unflatten(const FlattenedImage& flat) {
    check_flat(flat);
    std::vector<Rgb> pixels(flat.channel_r.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        pixels[i] = Rgb{flat.channel_r[i], flat.channel_g[i], flat.channel_b[i]};
    }
    return ImageBuffer(flat.width, flat.height, std::move(pixels));
}

ImageBuffer render_flattened(const FlattenedImage& flat) {
    check_flat(flat);
    const std::size_t n = flat.channel_r.size();
    auto byte_at = [&](std::size_t i) -> std::uint8_t {
        if (i < n) return flat.channel_r[i];
        if (i < 2 * n) return flat.channel_g[i - n];
        return flat.channel_b[i - 2 * n];
    };
    std::vector<Rgb> pixels(n);
    for (std::size_t i = 0; i < n; ++i) {
        pixels[i] = Rgb{byte_at(3 * i), byte_at(3 * i + 1), byte_at(3 * i + 2)};
    }
    return ImageBuffer(flat.width, flat.height, std::move(pixels));
}

}  // namespace xit
