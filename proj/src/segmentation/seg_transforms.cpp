#include "xit/segmentation/seg_transforms.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "xit/core/error.hpp"
#include "xit/core/permute.hpp"
#include "xit/transforms/block_transforms.hpp"

namespace xit {
namespace {

void check_map(const ImageBuffer& img, const SegmentationMap& map) {
    if (map.width != img.width() || map.height != img.height() ||
        map.labels.size() != img.size()) {
        throw InvalidArgument("segmentation map does not match image dimensions");
    }
}

}  // namespace

ImageBuffer segmentation_within_shuffle(const ImageBuffer& img, const SegmentationMap& map,
                                        double p, Rng& rng) {
    check_map(img, map);
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("shuffle probability must lie in [0, 1]");
    }
    ImageBuffer out = img;
    for (const auto& region : map.region_pixels()) {
        shuffle_selected(out.pixels(), region, p, rng);
    }
    return out;
}

ImageBuffer segmentation_within_shuffle(const ImageBuffer& img, int k, double p, Rng& rng) {
    return segmentation_within_shuffle(img, slic_segment(img, k), p, rng);
}

ImageBuffer segmentation_displacement_shuffle(const ImageBuffer& img, const SegmentationMap& map,
                                              Rng& rng) {
    check_map(img, map);
    const auto regions = map.region_pixels();
    const auto perm = random_permutation(regions.size(), rng);
    const auto src_pixels = img.pixels();

    ImageBuffer out = img;
    auto dst_pixels = out.pixels();
    for (std::size_t d = 0; d < regions.size(); ++d) {
        const auto& dst = regions[d];
        const auto& src = regions[perm[d]];
        std::vector<Rgb> pool;
        pool.reserve(std::max(src.size(), dst.size()));
        for (const auto i : src) {
            pool.push_back(src_pixels[i]);
        }
        fisher_yates_shuffle(std::span<Rgb>(pool), rng);
        if (src.size() < dst.size()) {
            const std::size_t deficit = dst.size() - src.size();
            for (std::size_t n = 0; n < deficit; ++n) {
                pool.push_back(src_pixels[src[rng.uniform_below(src.size())]]);
            }
            fisher_yates_shuffle(std::span<Rgb>(pool), rng);
        } else {
            pool.resize(dst.size());
        }
        for (std::size_t n = 0; n < dst.size(); ++n) {
            dst_pixels[dst[n]] = pool[n];
        }
    }
    return out;
}

ImageBuffer segmentation_displacement_shuffle(const ImageBuffer& img, int k, Rng& rng) {
    return segmentation_displacement_shuffle(img, slic_segment(img, k), rng);
}

void export_label_map(const SegmentationMap& map, const SlicParams& params,
                      const std::filesystem::path& png_path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(map.width);
    image.height = static_cast<png_uint_32>(map.height);

    int ok = 0;
    if (map.region_count <= 256) {
        image.format = PNG_FORMAT_GRAY;
        std::vector<png_byte> data(map.labels.begin(), map.labels.end());
        ok = png_image_write_to_file(&image, png_path.string().c_str(), 0, data.data(), 0, nullptr);
    } else {
        image.format = PNG_FORMAT_LINEAR_Y;
        std::vector<png_uint_16> data(map.labels.begin(), map.labels.end());
        ok = png_image_write_to_file(&image, png_path.string().c_str(), 0, data.data(), 0, nullptr);
    }
    if (!ok) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw IoError("cannot write label map '" + png_path.string() + "': " + msg);
    }

    nlohmann::json sidecar{{"requested_k", map.requested_segments},
                           {"actual_k", map.region_count},
                           {"compactness", params.compactness},
                           {"iters", params.iterations}};
    auto json_path = png_path;
    json_path.replace_extension(".json");
    std::ofstream out(json_path);
    if (!out) {
        throw IoError("cannot write '" + json_path.string() + "'");
    }
    out << sidecar.dump(2) << '\n';
}

}  // namespace xit
