#include "xit/core/transform_spec.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "xit/core/error.hpp"

namespace xit {
namespace {

struct KindInfo {
    TransformKind kind;
    std::string_view name;
    std::string_view title;
};

constexpr std::array<KindInfo, kTransformKindCount> kKinds{{
    {TransformKind::Baseline, "baseline", "Baseline"},
    {TransformKind::FullRandom, "full_random", "Full Random Shuffle"},
    {TransformKind::Grid, "grid", "Grid Shuffle"},
    {TransformKind::WithinGrid, "within_grid", "Within Grid Shuffle"},
    {TransformKind::LocalStructure, "local_structure", "Local Structure Shuffle"},
    {TransformKind::ColorFlatten, "color_flatten", "Color Flatten"},
    {TransformKind::SegWithin, "seg_within", "Segmentation Within Shuffle"},
    {TransformKind::SegDisplacement, "seg_displacement", "Segmentation Displacement Shuffle"},
}};

std::string format_probability(double p) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), p);
    return std::string(buf.data(), end);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

template <class T>
T parse_number(std::string_view text, std::string_view context) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("bad number '" + std::string(text) + "' in spec '" +
                              std::string(context) + "'");
    }
    return value;
}

}  // namespace

std::string_view kind_name(TransformKind kind) {
    return kKinds[static_cast<std::size_t>(kind)].name;
}

std::string_view kind_title(TransformKind kind) {
    return kKinds[static_cast<std::size_t>(kind)].title;
}

TransformKind parse_kind(std::string_view name) {
    for (const auto& info : kKinds) {
        if (info.name == name) {
            return info.kind;
        }
    }
    throw InvalidArgument("unknown transform '" + std::string(name) + "'");
}

bool uses_block(TransformKind kind) {
    return kind == TransformKind::Grid || kind == TransformKind::WithinGrid ||
           kind == TransformKind::LocalStructure;
}

bool uses_probability(TransformKind kind) {
    return kind == TransformKind::FullRandom || kind == TransformKind::WithinGrid ||
           kind == TransformKind::LocalStructure || kind == TransformKind::SegWithin;
}

bool uses_segments(TransformKind kind) {
    return kind == TransformKind::SegWithin || kind == TransformKind::SegDisplacement;
}

TransformSpec TransformSpec::baseline() { return {TransformKind::Baseline, {}, {}, {}}; }
TransformSpec TransformSpec::full_random(double p) { return {TransformKind::FullRandom, {}, p, {}}; }
TransformSpec TransformSpec::grid(int block) { return {TransformKind::Grid, block, {}, {}}; }
TransformSpec TransformSpec::within_grid(int block, double p) {
    return {TransformKind::WithinGrid, block, p, {}};
}
TransformSpec TransformSpec::local_structure(int block, double p) {
    return {TransformKind::LocalStructure, block, p, {}};
}
TransformSpec TransformSpec::color_flatten() { return {TransformKind::ColorFlatten, {}, {}, {}}; }
TransformSpec TransformSpec::seg_within(int segments, double p) {
    return {TransformKind::SegWithin, {}, p, segments};
}
TransformSpec TransformSpec::seg_displacement(int segments) {
    return {TransformKind::SegDisplacement, {}, {}, segments};
}

void TransformSpec::validate() const {
    const std::string name(kind_name(kind));
    if (uses_block(kind) != block_size.has_value()) {
        throw InvalidArgument(name + (block_size ? " takes no block size" : " requires a block size"));
    }
    if (uses_probability(kind) != probability.has_value()) {
        throw InvalidArgument(name + (probability ? " takes no probability" : " requires a probability"));
    }
    if (uses_segments(kind) != segments.has_value()) {
        throw InvalidArgument(name + (segments ? " takes no segment count" : " requires a segment count"));
    }
    if (block_size && *block_size <= 0) {
        throw InvalidArgument("block size must be positive");
    }
    if (probability && !(*probability >= 0.0 && *probability <= 1.0)) {
        throw InvalidArgument("probability must lie in [0, 1]");
    }
    if (segments && *segments <= 0) {
        throw InvalidArgument("segment count must be positive");
    }
}

std::string TransformSpec::canonical() const {
    std::string out(kind_name(kind));
    if (block_size) out += ":b=" + std::to_string(*block_size);
    if (segments) out += ":k=" + std::to_string(*segments);
    if (probability) out += ":p=" + format_probability(*probability);
    return out;
}

std::string TransformSpec::slug() const {
    std::string out(kind_name(kind));
    if (block_size) out += "_b" + std::to_string(*block_size);
    if (segments) out += "_k" + std::to_string(*segments);
    if (probability) out += "_p" + format_probability(*probability);
    return out;
}

TransformSpec parse_spec(std::string_view text) {
    const auto parts = split(text, ':');
    TransformSpec spec;
    spec.kind = parse_kind(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto field = parts[i];
        if (field.size() < 3 || field[1] != '=') {
            throw InvalidArgument("malformed field '" + std::string(field) + "' in spec '" +
                                  std::string(text) + "'");
        }
        const auto value = field.substr(2);
        switch (field[0]) {
            case 'b': spec.block_size = parse_number<int>(value, text); break;
            case 'k': spec.segments = parse_number<int>(value, text); break;
            case 'p': spec.probability = parse_number<double>(value, text); break;
            default:
                throw InvalidArgument("unknown field '" + std::string(field) + "' in spec '" +
                                      std::string(text) + "'");
        }
    }
    spec.validate();
    return spec;
}

}  // namespace xit
