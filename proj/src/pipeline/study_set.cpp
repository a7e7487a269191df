#include "xit/pipeline/study_set.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "xit/core/csv.hpp"
#include "xit/core/error.hpp"
#include "xit/core/permute.hpp"

namespace xit {
namespace {

using nlohmann::json;

std::string file_name(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

std::string make_id(char prefix, std::size_t n, int width) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, n);
    return buf;
}

StudyItem make_item(const SweepManifest& manifest, const ManifestEntry& entry,
                    const LabelMap& labels, const std::vector<std::string>& classes) {
    StudyItem item;
    item.image_path = std::filesystem::absolute(manifest.resolve(entry.output_path)).lexically_normal().string();
    item.source_path = entry.source_path;
    item.spec = entry.spec;
    item.true_class = labels.class_of(entry.source_path);
    item.class_options = classes;
    return item;
}

json item_to_json(const StudyItem& item) {
    return json{{"id", item.id},
                {"image_path", item.image_path},
                {"source_path", item.source_path},
                {"spec", item.spec.canonical()},
                {"true_class", item.true_class},
                {"class_options", item.class_options}};
}

StudyItem item_from_json(const json& j, const std::filesystem::path& base) {
    StudyItem item;
    item.id = j.at("id").get<std::string>();
    std::filesystem::path img = j.at("image_path").get<std::string>();
    if (img.is_relative()) img = base / img;
    item.image_path = img.string();
    item.source_path = j.value("source_path", "");
    item.spec = parse_spec(j.at("spec").get<std::string>());
    item.true_class = j.at("true_class").get<std::string>();
    item.class_options = j.at("class_options").get<std::vector<std::string>>();
    if (item.class_options.size() != static_cast<std::size_t>(kClassCount)) {
        throw InvalidArgument("study item " + item.id + " must list exactly 10 class options");
    }
    if (std::find(item.class_options.begin(), item.class_options.end(), item.true_class) ==
        item.class_options.end()) {
        throw InvalidArgument("study item " + item.id + ": true class not among its options");
    }
    return item;
}

}  // namespace

LabelMap LabelMap::read_csv(const std::filesystem::path& path) {
    const CsvTable table = CsvTable::read_file(path, false);
    LabelMap labels;
    for (const auto& row : table.rows()) {
        if (row.size() < 2) {
            throw InvalidArgument("labels file '" + path.string() + "': expected `path,class` rows");
        }
        if (row[0] == "path" && row[1] == "class") continue;
        labels.add(row[0], row[1]);
    }
    return labels;
}

void LabelMap::add(const std::string& path, const std::string& cls) {
    by_path_[path] = cls;
    by_name_[file_name(path)] = cls;
}

const std::string& LabelMap::class_of(const std::string& source_path) const {
    if (auto it = by_path_.find(source_path); it != by_path_.end()) return it->second;
    if (auto it = by_name_.find(file_name(source_path)); it != by_name_.end()) return it->second;
    throw InvalidArgument("no class label for '" + source_path + "'");
}

std::vector<std::string> LabelMap::classes() const {
    std::set<std::string> distinct;
    for (const auto& [path, cls] : by_path_) distinct.insert(cls);
    return {distinct.begin(), distinct.end()};
}

StudySet sample_study_set(const SweepManifest& manifest, const LabelMap& labels, Rng& rng) {
    StudySet set;
    set.class_options = labels.classes();
    if (set.class_options.size() != static_cast<std::size_t>(kClassCount)) {
        throw InvalidArgument("labels must name exactly 10 classes, found " +
                              std::to_string(set.class_options.size()));
    }

    // Group entries by spec, keeping sweep order and sorting sources.
    std::vector<std::pair<TransformSpec, std::vector<const ManifestEntry*>>> groups;
    for (const auto& spec : paper_sweep()) {
        std::vector<const ManifestEntry*> members;
        for (const auto& e : manifest.entries) {
            if (e.spec == spec) members.push_back(&e);
        }
        if (members.empty()) continue;
        std::sort(members.begin(), members.end(), [](const ManifestEntry* a, const ManifestEntry* b) {
            return a->source_path < b->source_path;
        });
        groups.emplace_back(spec, std::move(members));
    }
    if (groups.empty()) {
        throw InvalidArgument("manifest contains no sweep entries");
    }

    std::set<std::string> used_outputs;
    for (const auto& [spec, members] : groups) {
        std::set<std::string> sources;
        for (const auto* e : members) sources.insert(e->source_path);
        if (sources.size() < static_cast<std::size_t>(kImagesPerSpec)) {
            throw InvalidArgument("spec " + spec.canonical() + " has only " +
                                  std::to_string(sources.size()) +
                                  " source images; 3 are required");
        }
        const auto perm = random_permutation(members.size(), rng);
        for (int n = 0; n < kImagesPerSpec; ++n) {
            const ManifestEntry& entry = *members[perm[static_cast<std::size_t>(n)]];
            StudyItem item = make_item(manifest, entry, labels, set.class_options);
            item.id = make_id('t', set.items.size(), 3);
            used_outputs.insert(entry.output_path);
            set.items.push_back(std::move(item));
        }
    }

    // Practice: one entry per family present, then baselines up to 11.
    auto draw_practice = [&](auto predicate, const std::string& what) {
        std::vector<const ManifestEntry*> pool;
        for (const auto& e : manifest.entries) {
            if (predicate(e) && !used_outputs.count(e.output_path)) pool.push_back(&e);
        }
        if (pool.empty()) {
            throw InvalidArgument("not enough unused images for practice trial (" + what + ")");
        }
        std::sort(pool.begin(), pool.end(), [](const ManifestEntry* a, const ManifestEntry* b) {
            return a->output_path < b->output_path;
        });
        const ManifestEntry& entry = *pool[rng.uniform_below(pool.size())];
        StudyItem item = make_item(manifest, entry, labels, set.class_options);
        item.id = make_id('p', set.practice.size(), 2);
        used_outputs.insert(entry.output_path);
        set.practice.push_back(std::move(item));
    };
    for (int k = 0; k < kTransformKindCount; ++k) {
        const auto kind = static_cast<TransformKind>(k);
        const bool present = std::any_of(groups.begin(), groups.end(),
                                         [&](const auto& g) { return g.first.kind == kind; });
        if (!present) continue;
        draw_practice([&](const ManifestEntry& e) { return e.spec.kind == kind; },
                      std::string(kind_name(kind)));
    }
    while (set.practice.size() < static_cast<std::size_t>(kPracticeTrials)) {
        draw_practice([](const ManifestEntry& e) { return e.spec.kind == TransformKind::Baseline; },
                      "baseline");
    }
    return set;
}

void write_study_set(const StudySet& set, const std::filesystem::path& path) {
    json j{{"class_options", set.class_options}, {"items", json::array()}, {"practice", json::array()}};
    for (const auto& item : set.items) j["items"].push_back(item_to_json(item));
    for (const auto& item : set.practice) j["practice"].push_back(item_to_json(item));
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write study set '" + path.string() + "'");
    }
    out << j.dump(2) << '\n';
}

StudySet read_study_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open study set '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("study set '" + path.string() + "': " + e.what());
    }
    const auto base = path.parent_path();
    StudySet set;
    set.class_options = j.at("class_options").get<std::vector<std::string>>();
    for (const auto& item : j.at("items")) set.items.push_back(item_from_json(item, base));
    if (j.contains("practice")) {
        for (const auto& item : j.at("practice")) set.practice.push_back(item_from_json(item, base));
    }
    return set;
}

}  // namespace xit
