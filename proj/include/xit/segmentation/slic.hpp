#pragma once

#include <cstdint>
#include <vector>

#include "xit/core/image.hpp"

namespace xit {

/// Which implementation of the data-parallel SLIC kernels to run. Both give
/// bit-identical labels; Serial is the reference used by the tests.
enum class ExecutionPolicy { Serial, Parallel };

struct LabPixel {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// sRGB (D65) to CIELAB, per pixel.
LabPixel srgb_to_lab(Rgb px);
std::vector<LabPixel> to_lab(const ImageBuffer& img, ExecutionPolicy policy);

struct SlicParams {
    double compactness = 10.0;
    int iterations = 10;
};

/// Per-pixel region labels, contiguous in 0..region_count-1 and 4-connected.
struct SegmentationMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    int region_count = 0;
    int requested_segments = 0;

    std::int32_t at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }

    /// Pixel indices of every region, each list in row-major order.
    std::vector<std::vector<std::size_t>> region_pixels() const;

    friend bool operator==(const SegmentationMap&, const SegmentationMap&) = default;
};

/// SLIC superpixels. Seeds a grid of about k centres with spacing
/// S = sqrt(W·H/k), moves each to the lowest-gradient pixel of its 3×3
/// neighbourhood, then runs `iterations` rounds of windowed (2S×2S)
/// assignment under D² = d_lab² + (d_xy/S)²·m² followed by centre updates.
/// Orphaned fragments are finally merged into their largest 4-adjacent
/// region. No randomness.
SegmentationMap slic_segment(const ImageBuffer& img, int k, SlicParams params = {},
                             ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Relabels `labels` so that every label is one 4-connected component.
/// Components that are not the largest of their label adopt the label of
/// their largest adjacent component; labels are then renumbered 0..K-1 in
/// order of first appearance. Returns K.
int enforce_connectivity(std::vector<std::int32_t>& labels, int width, int height);

/// Number of 4-connected components of each label (test helper, also used by
/// the label export sidecar).
std::vector<int> components_per_label(const SegmentationMap& map);

}  // namespace xit
