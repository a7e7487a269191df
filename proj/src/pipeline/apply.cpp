#include "xit/pipeline/apply.hpp"

#include <string>

#include "xit/core/error.hpp"
#include "xit/segmentation/seg_transforms.hpp"

namespace xit {
namespace {

constexpr std::size_t kFlatHeaderSize = 12;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint16_t get_u16(std::span<const std::uint8_t> bytes, std::size_t at) {
    return static_cast<std::uint16_t>(bytes[at] | (bytes[at + 1] << 8));
}

const SegmentationMap& segmentation_for(const ImageBuffer& img, int k,
                                        const SegmentationMap* given, SegmentationMap& storage) {
    if (given != nullptr && given->requested_segments == k) {
        return *given;
    }
    storage = slic_segment(img, k);
    return storage;
}

}  // namespace

TransformOutput apply_transform(const ImageBuffer& img, const TransformSpec& spec, Rng& rng,
                                const SegmentationMap* segmentation) {
    spec.validate();
    SegmentationMap storage;
    switch (spec.kind) {
        case TransformKind::Baseline:
            return {img, std::nullopt, std::nullopt};
        case TransformKind::FullRandom:
            return {full_random_shuffle(img, *spec.probability, rng), std::nullopt, std::nullopt};
        case TransformKind::Grid:
            return {grid_shuffle(img, *spec.block_size, rng), std::nullopt, std::nullopt};
        case TransformKind::WithinGrid:
            return {within_grid_shuffle(img, *spec.block_size, *spec.probability, rng),
                    std::nullopt, std::nullopt};
        case TransformKind::LocalStructure:
            return {local_structure_shuffle(img, *spec.block_size, *spec.probability, rng),
                    std::nullopt, std::nullopt};
        case TransformKind::ColorFlatten: {
            auto flat = color_flatten(img);
            auto rendered = render_flattened(flat);
            return {std::move(rendered), std::move(flat), std::nullopt};
        }
        case TransformKind::SegWithin: {
            const auto& map = segmentation_for(img, *spec.segments, segmentation, storage);
            return {segmentation_within_shuffle(img, map, *spec.probability, rng), std::nullopt,
                    map.region_count};
        }
        case TransformKind::SegDisplacement: {
            const auto& map = segmentation_for(img, *spec.segments, segmentation, storage);
            return {segmentation_displacement_shuffle(img, map, rng), std::nullopt,
                    map.region_count};
        }
    }
    throw InvalidArgument("unhandled transform kind");
}

std::vector<std::uint8_t> encode_flat(const FlattenedImage& flat) {
    if (flat.width <= 0 || flat.height <= 0 || flat.width > 0xFFFF || flat.height > 0xFFFF) {
        throw InvalidArgument("flattened image dimensions do not fit the XITF header");
    }
    std::vector<std::uint8_t> out{'X', 'I', 'T', 'F'};
    out.reserve(kFlatHeaderSize + 3 * flat.channel_r.size());
    put_u16(out, static_cast<std::uint16_t>(flat.width));
    put_u16(out, static_cast<std::uint16_t>(flat.height));
    out.insert(out.end(), 4, 0);
    out.insert(out.end(), flat.channel_r.begin(), flat.channel_r.end());
    out.insert(out.end(), flat.channel_g.begin(), flat.channel_g.end());
    out.insert(out.end(), flat.channel_b.begin(), flat.channel_b.end());
    return out;
}

FlattenedImage decode_flat(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kFlatHeaderSize || bytes[0] != 'X' || bytes[1] != 'I' || bytes[2] != 'T' ||
        bytes[3] != 'F') {
        throw IoError("not an XITF file");
    }
    FlattenedImage flat;
    flat.width = get_u16(bytes, 4);
    flat.height = get_u16(bytes, 6);
    const std::size_t n = static_cast<std::size_t>(flat.width) * flat.height;
    if (bytes.size() != kFlatHeaderSize + 3 * n) {
        throw IoError("XITF payload size does not match its header");
    }
    const auto* p = bytes.data() + kFlatHeaderSize;
    flat.channel_r.assign(p, p + n);
    flat.channel_g.assign(p + n, p + 2 * n);
    flat.channel_b.assign(p + 2 * n, p + 3 * n);
    return flat;
}

}  // namespace xit
