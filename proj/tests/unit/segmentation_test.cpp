#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "test_support.hpp"
#include "xit/core/error.hpp"
#include "xit/segmentation/seg_transforms.hpp"
#include "xit/segmentation/slic.hpp"

namespace xit {
namespace {

// Reference values from scikit-image rgb2lab (D65).
TEST(Lab, MatchesReferenceConversion) {
    struct Case {
        Rgb in;
        double l, a, b;
    };
    const Case cases[] = {{{255, 255, 255}, 100.0, -0.0025, 0.0047},
                          {{255, 0, 0}, 53.2406, 80.0923, 67.2028},
                          {{0, 255, 0}, 87.7351, -86.1830, 83.1797},
                          {{0, 0, 255}, 32.2957, 79.1856, -107.8573},
                          {{128, 64, 32}, 34.7248, 24.9996, 31.3728},
                          {{10, 10, 10}, 2.7417, -0.0002, 0.0003}};
    for (const auto& c : cases) {
        const LabPixel p = srgb_to_lab(c.in);
        EXPECT_NEAR(p.l, c.l, 0.02);
        EXPECT_NEAR(p.a, c.a, 0.02);
        EXPECT_NEAR(p.b, c.b, 0.02);
    }
}

void expect_partition(const SegmentationMap& map) {
    ASSERT_EQ(map.labels.size(), static_cast<std::size_t>(map.width) * map.height);
    std::vector<int> seen(static_cast<std::size_t>(map.region_count), 0);
    for (const auto l : map.labels) {
        ASSERT_GE(l, 0);
        ASSERT_LT(l, map.region_count);
        seen[static_cast<std::size_t>(l)] = 1;
    }
    for (const int s : seen) EXPECT_EQ(s, 1);
    for (const int c : components_per_label(map)) EXPECT_EQ(c, 1);
}

TEST(Slic, SerialAndParallelAreBitIdentical) {
    Rng rng(17);
    for (const int k : {8, 16, 64}) {
        const ImageBuffer img = testing::blob_image(96, 64, rng);
        const auto serial = slic_segment(img, k, {}, ExecutionPolicy::Serial);
        const auto parallel = slic_segment(img, k, {}, ExecutionPolicy::Parallel);
        EXPECT_EQ(serial, parallel) << "k=" << k;
    }
}

TEST(Slic, LabelsPartitionIntoConnectedRegions) {
    Rng rng(23);
    for (const int k : {8, 16, 64}) {
        const ImageBuffer img = testing::blob_image(120, 80, rng);
        const auto map = slic_segment(img, k);
        expect_partition(map);
        EXPECT_GE(map.region_count, k / 2);
        EXPECT_LE(map.region_count, 2 * k);
        EXPECT_EQ(map.requested_segments, k);
    }
}

// Independent oracle: on a constant image the colour term vanishes and SLIC
// reduces to spatial k-means from the same grid seeds. The brute force below
// assigns every pixel to its nearest centre over all centres.
std::vector<std::int32_t> spatial_kmeans(int width, int height, int k, int iterations) {
    int nx = static_cast<int>(std::lround(std::sqrt(double(k) * width / height)));
    int ny = static_cast<int>(std::lround(double(k) / nx));
    std::vector<std::pair<double, double>> centers;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            centers.emplace_back(static_cast<int>((i + 0.5) * width / nx),
                                 static_cast<int>((j + 0.5) * height / ny));
        }
    }
    std::vector<std::int32_t> labels(static_cast<std::size_t>(width) * height);
    for (int it = 0; it < iterations; ++it) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < centers.size(); ++c) {
                    const double dx = x - centers[c].first;
                    const double dy = y - centers[c].second;
                    if (dx * dx + dy * dy < best) {
                        best = dx * dx + dy * dy;
                        labels[static_cast<std::size_t>(y) * width + x] = static_cast<std::int32_t>(c);
                    }
                }
            }
        }
        std::vector<double> sx(centers.size()), sy(centers.size()), n(centers.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            sx[c] += static_cast<double>(i % width);
            sy[c] += static_cast<double>(i / width);
            n[c] += 1;
        }
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (n[c] > 0) centers[c] = {sx[c] / n[c], sy[c] / n[c]};
        }
    }
    enforce_connectivity(labels, width, height);
    return labels;
}

TEST(Slic, UniformImageMatchesSpatialKMeans) {
    for (const auto& [w, h, k] : {std::tuple{60, 40, 6}, std::tuple{64, 64, 16}, std::tuple{90, 30, 12}}) {
        const ImageBuffer img(w, h, Rgb{120, 80, 40});
        const auto map = slic_segment(img, k, {}, ExecutionPolicy::Serial);
        EXPECT_EQ(map.labels, spatial_kmeans(w, h, k, 10)) << w << "x" << h << " k=" << k;
    }
}

TEST(Slic, UniformImageAreasAreBalanced) {
    const ImageBuffer img(320, 320, Rgb{200, 200, 200});
    for (const int k : {8, 16, 64}) {
        const auto map = slic_segment(img, k);
        const double target = 320.0 * 320.0 / k;
        for (const auto& region : map.region_pixels()) {
            EXPECT_NEAR(static_cast<double>(region.size()), target, 0.2 * target) << "k=" << k;
        }
    }
}

TEST(Slic, RejectsBadArguments) {
    const ImageBuffer img(10, 10);
    EXPECT_THROW(slic_segment(img, 0), InvalidArgument);
    EXPECT_THROW(slic_segment(img, 101), InvalidArgument);
    EXPECT_THROW(slic_segment(img, 4, {0.0, 10}), InvalidArgument);
    EXPECT_THROW(slic_segment(img, 4, {10.0, 0}), InvalidArgument);
    EXPECT_NO_THROW(slic_segment(img, 100));
    EXPECT_NO_THROW(slic_segment(img, 1));
}

TEST(Connectivity, MergesOrphansIntoLargestNeighbour) {
    // Label 0 has a stray pixel inside label 1's area.
    std::vector<std::int32_t> labels = {0, 0, 1, 1,
                                        0, 0, 1, 1,
                                        1, 1, 0, 1,
                                        1, 1, 1, 1};
    const int k = enforce_connectivity(labels, 4, 4);
    EXPECT_EQ(k, 2);
    // The stray pixel is surrounded by label 1 and adopts it.
    EXPECT_EQ(labels[10], labels[11]);
    EXPECT_EQ(labels[0], labels[5]);
    EXPECT_NE(labels[0], labels[10]);
    SegmentationMap map{4, 4, labels, k, 2};
    for (const int c : components_per_label(map)) EXPECT_EQ(c, 1);
}

TEST(SegWithin, PreservesRegionMultisets) {
    Rng rng(31);
    const ImageBuffer img = testing::blob_image(64, 48, rng);
    const auto map = slic_segment(img, 16);
    const ImageBuffer out = segmentation_within_shuffle(img, map, 1.0, rng);
    EXPECT_EQ(sorted_pixels(out), sorted_pixels(img));
    for (const auto& region : map.region_pixels()) {
        std::vector<Rgb> a, b;
        for (const auto i : region) {
            a.push_back(img.pixels()[i]);
            b.push_back(out.pixels()[i]);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b);
    }
    Rng r0(1);
    EXPECT_EQ(segmentation_within_shuffle(img, map, 0.0, r0), img);
}

TEST(SegDisplacement, OutputValuesComeFromInput) {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const ImageBuffer img = testing::random_image(12 + trial % 5, 10, rng);
        const auto out = segmentation_displacement_shuffle(img, 4, rng);
        ASSERT_EQ(out.size(), img.size());
        const auto sorted = sorted_pixels(img);
        for (const auto& px : out.pixels()) {
            EXPECT_TRUE(std::binary_search(sorted.begin(), sorted.end(), px));
        }
    }
}

TEST(SegDisplacement, EqualRegionsPreserveMultiset) {
    // Four 8x8 quadrants as a hand-built segmentation.
    SegmentationMap map{16, 16, std::vector<std::int32_t>(256), 4, 4};
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) map.labels[static_cast<std::size_t>(y) * 16 + x] = (y / 8) * 2 + x / 8;
    }
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const ImageBuffer img = testing::random_image(16, 16, rng);
        EXPECT_EQ(sorted_pixels(segmentation_displacement_shuffle(img, map, rng)), sorted_pixels(img));
    }
}

TEST(LabelExport, WritesPngAndSidecar) {
    testing::TempDir dir;
    Rng rng(2);
    const auto map = slic_segment(testing::blob_image(40, 40, rng), 8);
    export_label_map(map, {}, dir / "labels.png");
    EXPECT_TRUE(std::filesystem::exists(dir / "labels.png"));
    std::ifstream in(dir / "labels.json");
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j.at("requested_k").get<int>(), 8);
    EXPECT_EQ(j.at("actual_k").get<int>(), map.region_count);
    EXPECT_EQ(j.at("iters").get<int>(), 10);
}

}  // namespace
}  // namespace xit
