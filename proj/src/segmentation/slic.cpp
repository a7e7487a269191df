#include "xit/segmentation/slic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "xit/core/error.hpp"

namespace xit {
namespace {

constexpr double kXn = 0.95047;
constexpr double kYn = 1.00000;
constexpr double kZn = 1.08883;

// Centre sums are accumulated in fixed point so the parallel reduction is
// exact and independent of thread count.
constexpr double kFixedScale = 16777216.0;  // 2^24

const std::array<double, 256>& linear_lut() {
    static const std::array<double, 256> lut = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) {
            const double c = i / 255.0;
            t[static_cast<std::size_t>(i)] =
                c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
        }
        return t;
    }();
    return lut;
}

double lab_f(double t) {
    return t > 0.008856 ? std::cbrt(t) : 7.787 * t + 16.0 / 116.0;
}

struct Center {
    double l, a, b, x, y;
};

// Inclusive pixel window |x - cx| <= S, |y - cy| <= S, clamped to the image.
struct Window {
    int x0, x1, y0, y1;
};

Window window_of(const Center& c, double s, int width, int height) {
    return Window{std::max(0, static_cast<int>(std::ceil(c.x - s))),
                  std::min(width - 1, static_cast<int>(std::floor(c.x + s))),
                  std::max(0, static_cast<int>(std::ceil(c.y - s))),
                  std::min(height - 1, static_cast<int>(std::floor(c.y + s)))};
}

inline double slic_distance(const LabPixel& p, int x, int y, const Center& c,
                            double spatial_weight) {
    const double dl = p.l - c.l;
    const double da = p.a - c.a;
    const double db = p.b - c.b;
    const double dx = x - c.x;
    const double dy = y - c.y;
    return dl * dl + da * da + db * db + (dx * dx + dy * dy) * spatial_weight;
}

double gradient_at(const std::vector<LabPixel>& lab, int width, int height, int x, int y) {
    auto px = [&](int xx, int yy) -> const LabPixel& {
        xx = std::clamp(xx, 0, width - 1);
        yy = std::clamp(yy, 0, height - 1);
        return lab[static_cast<std::size_t>(yy) * width + xx];
    };
    auto sq = [](const LabPixel& u, const LabPixel& v) {
        return (u.l - v.l) * (u.l - v.l) + (u.a - v.a) * (u.a - v.a) + (u.b - v.b) * (u.b - v.b);
    };
    return sq(px(x + 1, y), px(x - 1, y)) + sq(px(x, y + 1), px(x, y - 1));
}

struct Seeding {
    std::vector<Center> centers;
    std::vector<std::int32_t> labels;  // initial grid-cell labels
};

Seeding seed_centers(const std::vector<LabPixel>& lab, int width, int height, int k) {
    int nx = std::max(1, static_cast<int>(std::lround(std::sqrt(double(k) * width / height))));
    nx = std::min(nx, width);
    int ny = std::max(1, static_cast<int>(std::lround(double(k) / nx)));
    ny = std::min(ny, height);
    const double step_x = double(width) / nx;
    const double step_y = double(height) / ny;

    Seeding seeding;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int cx = std::min(width - 1, static_cast<int>((i + 0.5) * step_x));
            int cy = std::min(height - 1, static_cast<int>((j + 0.5) * step_y));
            // First strict minimum in scan order, starting from the seed itself.
            double best = gradient_at(lab, width, height, cx, cy);
            int bx = cx;
            int by = cy;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int x = cx + dx;
                    const int y = cy + dy;
                    if (x < 0 || y < 0 || x >= width || y >= height) continue;
                    const double g = gradient_at(lab, width, height, x, y);
                    if (g < best) {
                        best = g;
                        bx = x;
                        by = y;
                    }
                }
            }
            const LabPixel& p = lab[static_cast<std::size_t>(by) * width + bx];
            seeding.centers.push_back(Center{p.l, p.a, p.b, double(bx), double(by)});
        }
    }
    seeding.labels.resize(lab.size());
    for (int y = 0; y < height; ++y) {
        const int cj = std::min(ny - 1, static_cast<int>(y / step_y));
        for (int x = 0; x < width; ++x) {
            const int ci = std::min(nx - 1, static_cast<int>(x / step_x));
            seeding.labels[static_cast<std::size_t>(y) * width + x] = cj * nx + ci;
        }
    }
    return seeding;
}

// Reference assignment: classic centre-major loop. Pixels outside every
// window keep their previous label.
void assign_serial(const std::vector<LabPixel>& lab, int width, int height,
                   const std::vector<Center>& centers, double s, double spatial_weight,
                   std::vector<std::int32_t>& labels) {
    std::vector<double> dist(lab.size(), std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const Window w = window_of(centers[c], s, width, height);
        for (int y = w.y0; y <= w.y1; ++y) {
            for (int x = w.x0; x <= w.x1; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                const double d = slic_distance(lab[i], x, y, centers[c], spatial_weight);
                if (d < dist[i]) {
                    dist[i] = d;
                    labels[i] = static_cast<std::int32_t>(c);
                }
            }
        }
    }
}

// Pixel-major assignment, parallel over rows. Candidates are visited in
// ascending centre index with a strict comparison, so ties resolve exactly
// as in assign_serial.
void assign_parallel(const std::vector<LabPixel>& lab, int width, int height,
                     const std::vector<Center>& centers, double s, double spatial_weight,
                     std::vector<std::int32_t>& labels) {
    std::vector<Window> windows(centers.size());
    for (std::size_t c = 0; c < centers.size(); ++c) {
        windows[c] = window_of(centers[c], s, width, height);
    }
#pragma omp parallel
    {
        std::vector<std::int32_t> row_candidates;
#pragma omp for schedule(static)
        for (int y = 0; y < height; ++y) {
            row_candidates.clear();
            for (std::size_t c = 0; c < centers.size(); ++c) {
                if (windows[c].y0 <= y && y <= windows[c].y1) {
                    row_candidates.push_back(static_cast<std::int32_t>(c));
                }
            }
            for (int x = 0; x < width; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                double best = std::numeric_limits<double>::infinity();
                std::int32_t best_label = labels[i];
                for (const auto c : row_candidates) {
                    const Window& w = windows[static_cast<std::size_t>(c)];
                    if (x < w.x0 || x > w.x1) continue;
                    const double d =
                        slic_distance(lab[i], x, y, centers[static_cast<std::size_t>(c)], spatial_weight);
                    if (d < best) {
                        best = d;
                        best_label = c;
                    }
                }
                labels[i] = best_label;
            }
        }
    }
}

struct Accumulator {
    std::int64_t l = 0, a = 0, b = 0, x = 0, y = 0, count = 0;

    Accumulator& operator+=(const Accumulator& o) {
        l += o.l; a += o.a; b += o.b; x += o.x; y += o.y; count += o.count;
        return *this;
    }
};

struct FixedLab {
    std::int64_t l, a, b;
};

std::vector<FixedLab> to_fixed(const std::vector<LabPixel>& lab) {
    std::vector<FixedLab> out(lab.size());
    for (std::size_t i = 0; i < lab.size(); ++i) {
        out[i] = FixedLab{std::llround(lab[i].l * kFixedScale), std::llround(lab[i].a * kFixedScale),
                          std::llround(lab[i].b * kFixedScale)};
    }
    return out;
}

void apply_sums(const std::vector<Accumulator>& sums, std::vector<Center>& centers) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const Accumulator& acc = sums[c];
        if (acc.count == 0) continue;  // empty cluster keeps its centre
        const double n = static_cast<double>(acc.count);
        centers[c] = Center{static_cast<double>(acc.l) / kFixedScale / n,
                            static_cast<double>(acc.a) / kFixedScale / n,
                            static_cast<double>(acc.b) / kFixedScale / n,
                            static_cast<double>(acc.x) / n, static_cast<double>(acc.y) / n};
    }
}

void update_serial(const std::vector<FixedLab>& fixed, int width,
                   const std::vector<std::int32_t>& labels, std::vector<Center>& centers) {
    std::vector<Accumulator> sums(centers.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        Accumulator& acc = sums[static_cast<std::size_t>(labels[i])];
        acc.l += fixed[i].l;
        acc.a += fixed[i].a;
        acc.b += fixed[i].b;
        acc.x += static_cast<std::int64_t>(i % static_cast<std::size_t>(width));
        acc.y += static_cast<std::int64_t>(i / static_cast<std::size_t>(width));
        acc.count += 1;
    }
    apply_sums(sums, centers);
}

void update_parallel(const std::vector<FixedLab>& fixed, int width,
                     const std::vector<std::int32_t>& labels, std::vector<Center>& centers) {
    std::vector<Accumulator> sums(centers.size());
    const auto n = static_cast<std::int64_t>(labels.size());
#pragma omp parallel
    {
        std::vector<Accumulator> local(centers.size());
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            const auto u = static_cast<std::size_t>(i);
            Accumulator& acc = local[static_cast<std::size_t>(labels[u])];
            acc.l += fixed[u].l;
            acc.a += fixed[u].a;
            acc.b += fixed[u].b;
            acc.x += i % width;
            acc.y += i / width;
            acc.count += 1;
        }
#pragma omp critical(xit_slic_update)
        for (std::size_t c = 0; c < sums.size(); ++c) {
            sums[c] += local[c];
        }
    }
    apply_sums(sums, centers);
}

}  // namespace

LabPixel srgb_to_lab(Rgb px) {
    const auto& lut = linear_lut();
    const double r = lut[px.r];
    const double g = lut[px.g];
    const double b = lut[px.b];
    const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / kXn;
    const double y = (0.2126729 * r + 0.7151522 * g + 0.0721750 * b) / kYn;
    const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / kZn;
    const double fx = lab_f(x);
    const double fy = lab_f(y);
    const double fz = lab_f(z);
    return LabPixel{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::vector<LabPixel> to_lab(const ImageBuffer& img, ExecutionPolicy policy) {
    const auto px = img.pixels();
    std::vector<LabPixel> lab(px.size());
    const auto n = static_cast<std::int64_t>(px.size());
    if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) {
            lab[static_cast<std::size_t>(i)] = srgb_to_lab(px[static_cast<std::size_t>(i)]);
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            lab[static_cast<std::size_t>(i)] = srgb_to_lab(px[static_cast<std::size_t>(i)]);
        }
    }
    return lab;
}

std::vector<std::vector<std::size_t>> SegmentationMap::region_pixels() const {
    std::vector<std::vector<std::size_t>> regions(static_cast<std::size_t>(region_count));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        regions[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    return regions;
}

SegmentationMap slic_segment(const ImageBuffer& img, int k, SlicParams params,
                             ExecutionPolicy policy) {
    const auto pixel_count = static_cast<long long>(img.size());
    if (k < 1 || k > pixel_count) {
        throw InvalidArgument("requested segments " + std::to_string(k) + " outside [1, " +
                              std::to_string(pixel_count) + "]");
    }
    if (!(params.compactness > 0.0)) {
        throw InvalidArgument("compactness must be positive");
    }
    if (params.iterations < 1) {
        throw InvalidArgument("SLIC needs at least one iteration");
    }

    const int width = img.width();
    const int height = img.height();
    const auto lab = to_lab(img, policy);
    const auto fixed = to_fixed(lab);
    const double s = std::sqrt(double(width) * height / k);
    const double spatial_weight = params.compactness * params.compactness / (s * s);

    Seeding seeding = seed_centers(lab, width, height, k);
    std::vector<Center>& centers = seeding.centers;
    std::vector<std::int32_t>& labels = seeding.labels;

    for (int iter = 0; iter < params.iterations; ++iter) {
        if (policy == ExecutionPolicy::Parallel) {
            assign_parallel(lab, width, height, centers, s, spatial_weight, labels);
            update_parallel(fixed, width, labels, centers);
        } else {
            assign_serial(lab, width, height, centers, s, spatial_weight, labels);
            update_serial(fixed, width, labels, centers);
        }
    }

    SegmentationMap map;
    map.width = width;
    map.height = height;
    map.requested_segments = k;
    map.region_count = enforce_connectivity(labels, width, height);
    map.labels = std::move(labels);
    return map;
}

namespace {

struct Components {
    std::vector<std::int32_t> id;       // per pixel
    std::vector<std::int32_t> label;    // per component
    std::vector<std::int64_t> size;     // per component
};

Components find_components(const std::vector<std::int32_t>& labels, int width, int height) {
    Components comps;
    comps.id.assign(labels.size(), -1);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < labels.size(); ++start) {
        if (comps.id[start] >= 0) continue;
        const auto cid = static_cast<std::int32_t>(comps.label.size());
        const std::int32_t lbl = labels[start];
        std::int64_t count = 0;
        comps.id[start] = cid;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            ++count;
            const int x = static_cast<int>(i % static_cast<std::size_t>(width));
            const int y = static_cast<int>(i / static_cast<std::size_t>(width));
            const std::array<std::pair<int, int>, 4> nbrs{{{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}}};
            for (const auto& [nx, ny] : nbrs) {
                if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
                const std::size_t j = static_cast<std::size_t>(ny) * width + nx;
                if (comps.id[j] < 0 && labels[j] == lbl) {
                    comps.id[j] = cid;
                    stack.push_back(j);
                }
            }
        }
        comps.label.push_back(lbl);
        comps.size.push_back(count);
    }
    return comps;
}

}  // namespace

int enforce_connectivity(std::vector<std::int32_t>& labels, int width, int height) {
    for (;;) {
        Components comps = find_components(labels, width, height);
        const std::size_t ncomp = comps.label.size();

        // Largest component of every label (lowest component id on ties).
        std::vector<std::int32_t> keeper;
        for (std::size_t c = 0; c < ncomp; ++c) {
            const auto lbl = static_cast<std::size_t>(comps.label[c]);
            if (lbl >= keeper.size()) keeper.resize(lbl + 1, -1);
            if (keeper[lbl] < 0 || comps.size[c] > comps.size[static_cast<std::size_t>(keeper[lbl])]) {
                keeper[lbl] = static_cast<std::int32_t>(c);
            }
        }
        std::vector<std::int32_t> orphans;
        for (std::size_t c = 0; c < ncomp; ++c) {
            if (keeper[static_cast<std::size_t>(comps.label[c])] != static_cast<std::int32_t>(c)) {
                orphans.push_back(static_cast<std::int32_t>(c));
            }
        }
        if (orphans.empty()) break;

        std::vector<std::vector<std::int32_t>> adjacent(ncomp);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                const auto a = comps.id[i];
                if (x + 1 < width) {
                    const auto b = comps.id[i + 1];
                    if (a != b) {
                        adjacent[static_cast<std::size_t>(a)].push_back(b);
                        adjacent[static_cast<std::size_t>(b)].push_back(a);
                    }
                }
                if (y + 1 < height) {
                    const auto b = comps.id[i + static_cast<std::size_t>(width)];
                    if (a != b) {
                        adjacent[static_cast<std::size_t>(a)].push_back(b);
                        adjacent[static_cast<std::size_t>(b)].push_back(a);
                    }
                }
            }
        }
        for (auto& adj : adjacent) {
            std::sort(adj.begin(), adj.end());
            adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        }

        std::stable_sort(orphans.begin(), orphans.end(), [&](std::int32_t a, std::int32_t b) {
            return comps.size[static_cast<std::size_t>(a)] < comps.size[static_cast<std::size_t>(b)];
        });
        // comps.label is updated in place so later orphans see earlier merges.
        for (const auto o : orphans) {
            const auto ou = static_cast<std::size_t>(o);
            std::int32_t target = -1;
            for (const auto c : adjacent[ou]) {
                const auto cu = static_cast<std::size_t>(c);
                if (comps.label[cu] == comps.label[ou]) continue;
                if (target < 0 || comps.size[cu] > comps.size[static_cast<std::size_t>(target)]) {
                    target = c;
                }
            }
            if (target >= 0) {
                comps.label[ou] = comps.label[static_cast<std::size_t>(target)];
            }
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = comps.label[static_cast<std::size_t>(comps.id[i])];
        }
    }

    // Renumber by first appearance.
    std::vector<std::int32_t> remap;
    std::int32_t next = 0;
    for (auto& lbl : labels) {
        const auto u = static_cast<std::size_t>(lbl);
        if (u >= remap.size()) remap.resize(u + 1, -1);
        if (remap[u] < 0) remap[u] = next++;
        lbl = remap[u];
    }
    return next;
}

std::vector<int> components_per_label(const SegmentationMap& map) {
    const Components comps = find_components(map.labels, map.width, map.height);
    std::vector<int> counts(static_cast<std::size_t>(map.region_count), 0);
    for (const auto lbl : comps.label) {
        counts[static_cast<std::size_t>(lbl)] += 1;
    }
    return counts;
}

}  // namespace xit
