#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "xit/core/rng.hpp"
#include "xit/core/transform_spec.hpp"
#include "xit/pipeline/sweep.hpp"

namespace xit {

inline constexpr int kImagesPerSpec = 3;
inline constexpr int kClassCount = 10;
inline constexpr int kPracticeTrials = 11;

struct StudyItem {
    std::string id;
    std::string image_path;  // absolute
    std::string source_path;
    TransformSpec spec;
    std::string true_class;
    std::vector<std::string> class_options;
};

struct StudySet {
    std::vector<StudyItem> items;     // test items, 3 per spec
    std::vector<StudyItem> practice;  // 11 practice items
    std::vector<std::string> class_options;
};

/// Source image class labels keyed by both the path as written and its file
/// name. Reads CSV `path,class` (header row optional).
class LabelMap {
public:
    static LabelMap read_csv(const std::filesystem::path& path);
    void add(const std::string& path, const std::string& cls);

    /// Throws InvalidArgument when `source_path` has no label.
    const std::string& class_of(const std::string& source_path) const;
    /// Sorted distinct classes.
    std::vector<std::string> classes() const;

private:
    std::map<std::string, std::string> by_path_;
    std::map<std::string, std::string> by_name_;
};

/// Samples kImagesPerSpec entries per spec without replacement (uniform over
/// source images, no class balancing), specs in sweep order. Then draws the
/// practice set: one entry per transform family followed by extra baselines,
/// never reusing a test image. Requires exactly kClassCount distinct classes.
StudySet sample_study_set(const SweepManifest& manifest, const LabelMap& labels, Rng& rng);

void write_study_set(const StudySet& set, const std::filesystem::path& path);
StudySet read_study_set(const std::filesystem::path& path);

}  // namespace xit
