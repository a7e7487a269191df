#include "xit/pipeline/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>

#include "xit/core/error.hpp"
#include "xit/core/image.hpp"
#include "xit/core/log.hpp"
#include "xit/core/rng.hpp"
#include "xit/pipeline/apply.hpp"

namespace xit {
namespace {

using nlohmann::json;

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint8_t byte) {
    h ^= byte;
    h *= kFnvPrime;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json entry_to_json(const ManifestEntry& e) {
    json j{{"record", "entry"},
           {"source_path", e.source_path},
           {"spec", e.spec.canonical()},
           {"seed", e.seed},
           {"output_path", e.output_path}};
    if (e.flat_path) j["flat_path"] = *e.flat_path;
    if (e.actual_segments) j["actual_segments"] = *e.actual_segments;
    return j;
}

ManifestEntry entry_from_json(const json& j) {
    ManifestEntry e;
    e.source_path = j.at("source_path").get<std::string>();
    e.spec = parse_spec(j.at("spec").get<std::string>());
    e.seed = j.at("seed").get<std::uint64_t>();
    e.output_path = j.at("output_path").get<std::string>();
    if (j.contains("flat_path")) e.flat_path = j["flat_path"].get<std::string>();
    if (j.contains("actual_segments")) e.actual_segments = j["actual_segments"].get<int>();
    return e;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

struct JobResult {
    std::optional<ManifestEntry> entry;
    std::optional<std::string> warning;
};

class ManifestWriter {
public:
    explicit ManifestWriter(const std::filesystem::path& path) : out_(path, std::ios::trunc) {
        if (!out_) {
            throw IoError("cannot create manifest '" + path.string() + "'");
        }
    }

    void append(const json& record) {
        std::lock_guard lock(mutex_);
        out_ << record.dump() << '\n';
        out_.flush();
    }

private:
    std::mutex mutex_;
    std::ofstream out_;
};

}  // namespace

std::vector<TransformSpec> paper_sweep() {
    std::vector<TransformSpec> specs;
    constexpr int kBlocks[] = {20, 40, 80, 160};
    constexpr double kBlockProbabilities[] = {0.5, 1.0};
    constexpr int kSegments[] = {8, 16, 64};

    specs.push_back(TransformSpec::baseline());
    for (double p : {0.5, 0.8, 1.0}) specs.push_back(TransformSpec::full_random(p));
    for (int b : kBlocks) specs.push_back(TransformSpec::grid(b));
    for (double p : kBlockProbabilities)
        for (int b : kBlocks) specs.push_back(TransformSpec::within_grid(b, p));
    for (double p : kBlockProbabilities)
        for (int b : kBlocks) specs.push_back(TransformSpec::local_structure(b, p));
    specs.push_back(TransformSpec::color_flatten());
    for (double p : kBlockProbabilities)
        for (int k : kSegments) specs.push_back(TransformSpec::seg_within(k, p));
    for (int k : kSegments) specs.push_back(TransformSpec::seg_displacement(k));
    return specs;
}

std::uint64_t derive_job_seed(std::uint64_t master_seed, std::string_view image_name,
                              std::string_view spec_canonical) {
    std::uint64_t h = kFnvOffset;
    for (int i = 0; i < 8; ++i) {
        fnv_mix(h, static_cast<std::uint8_t>(master_seed >> (8 * i)));
    }
    for (const char ch : image_name) fnv_mix(h, static_cast<std::uint8_t>(ch));
    fnv_mix(h, 0x1F);
    for (const char ch : spec_canonical) fnv_mix(h, static_cast<std::uint8_t>(ch));
    return splitmix64(h);
}

std::vector<TransformSpec> filter_sweep(const std::vector<std::string>& only) {
    const auto all = paper_sweep();
    if (only.empty()) return all;
    std::vector<TransformSpec> out;
    for (const auto& spec : all) {
        const auto canonical = spec.canonical();
        const bool keep = std::any_of(only.begin(), only.end(), [&](const std::string& f) {
            return f == canonical || f == kind_name(spec.kind);
        });
        if (keep) out.push_back(spec);
    }
    for (const auto& f : only) {
        const bool matched = std::any_of(all.begin(), all.end(), [&](const TransformSpec& s) {
            return f == s.canonical() || f == kind_name(s.kind);
        });
        if (!matched) {
            throw InvalidArgument("--only filter '" + f + "' matches no sweep spec");
        }
    }
    return out;
}

SweepManifest apply_sweep(const SweepOptions& options) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(options.input_dir)) {
        throw IoError("input directory '" + options.input_dir.string() + "' does not exist");
    }
    std::vector<fs::path> sources;
    for (const auto& entry : fs::directory_iterator(options.input_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            sources.push_back(entry.path());
        }
    }
    std::sort(sources.begin(), sources.end());
    if (sources.empty()) {
        throw IoError("no PNG images in '" + options.input_dir.string() + "'");
    }
    const auto specs = filter_sweep(options.only);

    fs::create_directories(options.output_dir);
    SweepManifest manifest;
    manifest.dataset_name = options.dataset_name.empty()
                                ? options.input_dir.filename().string()
                                : options.dataset_name;
    manifest.created_at = utc_timestamp();
    manifest.master_seed = options.master_seed;
    manifest.base_dir = options.output_dir;

    ManifestWriter writer(options.output_dir / kManifestName);
    writer.append(json{{"record", "header"},
                       {"dataset_name", manifest.dataset_name},
                       {"created_at", manifest.created_at},
                       {"master_seed", manifest.master_seed},
                       {"spec_count", specs.size()},
                       {"image_count", sources.size()}});

    auto record_warning = [&](const std::string& message) {
        warn(message);
        manifest.warnings.push_back(message);
        writer.append(json{{"record", "warning"}, {"message", message}});
    };

    for (const auto& source : sources) {
        const std::string image_name = source.filename().string();
        std::optional<ImageBuffer> img;
        try {
            img = load_image(source);
        } catch (const std::exception& e) {
            record_warning("skipping '" + source.string() + "': " + e.what());
            continue;
        }
        const fs::path image_dir = options.output_dir / source.stem();
        fs::create_directories(image_dir);

        // One SLIC run per distinct segment count, shared by the jobs.
        std::set<int> segment_counts;
        for (const auto& spec : specs) {
            if (spec.segments) segment_counts.insert(*spec.segments);
        }
        std::map<int, SegmentationMap> segmentations;
        for (int k : segment_counts) {
            segmentations.emplace(k, slic_segment(*img, k, {}, options.policy));
        }

        std::vector<JobResult> results(specs.size());
        auto run_job = [&](std::size_t j) {
            const TransformSpec& spec = specs[j];
            const std::string canonical = spec.canonical();
            if (spec.block_size && (img->width() % *spec.block_size != 0 ||
                                    img->height() % *spec.block_size != 0)) {
                results[j].warning = "skipping " + canonical + " for '" + image_name +
                                     "': block size must divide image dimensions";
                return;
            }
            try {
                ManifestEntry entry;
                entry.source_path = source.string();
                entry.spec = spec;
                entry.seed = derive_job_seed(options.master_seed, image_name, canonical);
                Rng rng(entry.seed);
                const SegmentationMap* seg =
                    spec.segments ? &segmentations.at(*spec.segments) : nullptr;
                TransformOutput out = apply_transform(*img, spec, rng, seg);

                const std::string rel = source.stem().string() + "/" + spec.slug() + ".png";
                save_image(out.image, options.output_dir / rel);
                entry.output_path = rel;
                if (out.flat) {
                    const std::string flat_rel = source.stem().string() + "/" + spec.slug() + ".xitf";
                    write_bytes(options.output_dir / flat_rel, encode_flat(*out.flat));
                    entry.flat_path = flat_rel;
                }
                entry.actual_segments = out.actual_segments;
                results[j].entry = std::move(entry);
            } catch (const std::exception& e) {
                results[j].warning = "job " + canonical + " for '" + image_name + "' failed: " + e.what();
            }
        };

        const auto job_count = static_cast<std::int64_t>(specs.size());
        if (options.policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t j = 0; j < job_count; ++j) run_job(static_cast<std::size_t>(j));
        } else {
            for (std::int64_t j = 0; j < job_count; ++j) run_job(static_cast<std::size_t>(j));
        }

        for (auto& result : results) {
            if (result.warning) record_warning(*result.warning);
            if (result.entry) {
                writer.append(entry_to_json(*result.entry));
                manifest.entries.push_back(std::move(*result.entry));
            }
        }
    }
    return manifest;
}

SweepManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest '" + path.string() + "'");
    }
    SweepManifest manifest;
    manifest.base_dir = path.parent_path();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw IoError("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
        const std::string record = j.value("record", "entry");
        if (record == "header") {
            manifest.dataset_name = j.value("dataset_name", "");
            manifest.created_at = j.value("created_at", "");
            manifest.master_seed = j.value("master_seed", std::uint64_t{0});
        } else if (record == "warning") {
            manifest.warnings.push_back(j.value("message", ""));
        } else if (record == "entry") {
            manifest.entries.push_back(entry_from_json(j));
        }
    }
    return manifest;
}

}  // namespace xit
