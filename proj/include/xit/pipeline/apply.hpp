#pragma once

#include <optional>

#include "xit/core/image.hpp"
#include "xit/core/rng.hpp"
#include "xit/core/transform_spec.hpp"
#include "xit/segmentation/slic.hpp"
#include "xit/transforms/block_transforms.hpp"

namespace xit {

struct TransformOutput {
    /// Displayable result; for ColorFlatten this is render_flattened().
    ImageBuffer image;
    std::optional<FlattenedImage> flat;
    /// Region count actually produced by SLIC (segmentation kinds only).
    std::optional<int> actual_segments;
};

/// Dispatches on spec.kind. `segmentation` may supply a precomputed SLIC map
/// for the spec's segment count; otherwise it is computed with default params.
TransformOutput apply_transform(const ImageBuffer& img, const TransformSpec& spec, Rng& rng,
                                const SegmentationMap* segmentation = nullptr);

/// Planar ColorFlatten file: "XITF", u16 width, u16 height, u32 reserved (all
/// little-endian), then the R, G and B planes.
std::vector<std::uint8_t> encode_flat(const FlattenedImage& flat);
FlattenedImage decode_flat(std::span<const std::uint8_t> bytes);

}  // namespace xit
