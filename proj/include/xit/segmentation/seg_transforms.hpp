#pragma once

#include <filesystem>

#include "xit/core/image.hpp"
#include "xit/core/rng.hpp"
#include "xit/segmentation/slic.hpp"

namespace xit {

/// Select-then-permute inside each region, regions in ascending label order,
/// region pixels in row-major order. Region membership of every position is
/// unchanged.
ImageBuffer segmentation_within_shuffle(const ImageBuffer& img, const SegmentationMap& map,
                                        double p, Rng& rng);
ImageBuffer segmentation_within_shuffle(const ImageBuffer& img, int k, double p, Rng& rng);

/// Moves the (shuffled) pixels of each region into another region chosen by
/// one uniform permutation over labels. Destination d receives the pixels of
/// source s = perm[d]: the source values are shuffled; a smaller source is
/// topped up with values drawn uniformly with replacement from it and the
/// pool reshuffled; a larger source has its trailing surplus dropped. Pools
/// are written to d's pixels in row-major order, destinations in ascending
/// label order.
ImageBuffer segmentation_displacement_shuffle(const ImageBuffer& img, const SegmentationMap& map,
                                              Rng& rng);
ImageBuffer segmentation_displacement_shuffle(const ImageBuffer& img, int k, Rng& rng);

/// Debug export: label PNG (8-bit gray when K <= 256, else 16-bit) plus a
/// JSON sidecar {requested_k, actual_k, compactness, iters}.
void export_label_map(const SegmentationMap& map, const SlicParams& params,
                      const std::filesystem::path& png_path);

}  // namespace xit
