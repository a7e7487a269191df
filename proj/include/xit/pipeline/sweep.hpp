#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xit/core/transform_spec.hpp"
#include "xit/segmentation/slic.hpp"

namespace xit {

/// The 34 transform-parameter pairs, in canonical order: baseline, full random
/// (3), grid (4), within grid (8), local structure (8), color flatten,
/// segmentation within (6), segmentation displacement (3).
std::vector<TransformSpec> paper_sweep();

/// Per-job seed: FNV-1a 64 over (master seed as 8 little-endian bytes,
/// image name, 0x1F, canonical spec string), finalized with one SplitMix64
/// step.
std::uint64_t derive_job_seed(std::uint64_t master_seed, std::string_view image_name,
                              std::string_view spec_canonical);

struct ManifestEntry {
    std::string source_path;
    TransformSpec spec;
    std::uint64_t seed = 0;
    /// Relative to the manifest directory.
    std::string output_path;
    /// ColorFlatten planar file, relative to the manifest directory.
    std::optional<std::string> flat_path;
    std::optional<int> actual_segments;
};

struct SweepManifest {
    std::string dataset_name;
    std::string created_at;
    std::uint64_t master_seed = 0;
    std::filesystem::path base_dir;
    std::vector<ManifestEntry> entries;
    std::vector<std::string> warnings;

    std::filesystem::path resolve(const std::string& relative) const { return base_dir / relative; }
};

struct SweepOptions {
    std::filesystem::path input_dir;
    std::filesystem::path output_dir;
    std::uint64_t master_seed = 0;
    /// Canonical spec strings or kind names; empty means the whole sweep.
    std::vector<std::string> only;
    std::string dataset_name;
    ExecutionPolicy policy = ExecutionPolicy::Parallel;
};

/// Selects the sweep specs matching `only` (exact canonical string or kind
/// name). Throws InvalidArgument on a filter that matches nothing.
std::vector<TransformSpec> filter_sweep(const std::vector<std::string>& only);

/// Applies every selected spec to every PNG in input_dir (sorted by name),
/// writing <output>/<image stem>/<spec slug>.png and <output>/manifest.jsonl.
/// Block specs that do not divide an image are skipped with a warning; a
/// failing job is recorded as a warning and the sweep continues.
SweepManifest apply_sweep(const SweepOptions& options);

inline constexpr std::string_view kManifestName = "manifest.jsonl";

/// Reads a manifest written by apply_sweep. Non-entry records other than the
/// header and warnings are ignored.
SweepManifest read_manifest(const std::filesystem::path& path);

}  // namespace xit
