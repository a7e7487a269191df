#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xit/stats/descriptive.hpp"
#include "xit/stats/ols.hpp"
#include "xit/stats/ranking.hpp"
#include "xit/stats/response_table.hpp"

namespace xit::stats {

/// Per-trial response schema shared by the study service export and
/// `xit stats --responses`.
inline constexpr std::array<std::string_view, 9> kTrialColumns = {
    "subject_id", "subject_kind", "spec",       "image", "choice",
    "true_class", "correct",      "confidence", "rt_ms"};

struct TrialRow {
    std::string subject_id;
    std::string subject_kind;
    TransformSpec spec;
    std::string image;
    std::string choice;
    std::string true_class;
    bool correct = false;
    std::optional<int> confidence;
    std::optional<double> rt_ms;
    /// Present when the input carries the optional export columns.
    std::string phase;
    bool catch_failed = false;
};

/// Reads the trial schema; extra columns other than phase/catch_failed are
/// ignored. Rows whose phase is "practice" are dropped.
std::vector<TrialRow> read_trials(const std::filesystem::path& path);

/// Fewer human subjects with reaction times than this leaves the MAD filter
/// unapplied: one subject always has MAD 0 and two always lose the faster one.
inline constexpr std::size_t kMadMinSubjects = 3;

struct Aggregation {
    ResponseTable table;
    /// Present when at least kMadMinSubjects human subjects have reaction times.
    std::optional<MadFilterResult> mad;
    /// Human subjects with reaction times, whether or not the filter ran.
    std::size_t rt_subjects = 0;
    std::vector<std::string> catch_failed_subjects;
    std::size_t trials_used = 0;
};

/// Human subjects are MAD-filtered on their median per-trial rt_ms; retained
/// human trials and all model trials are pooled into percent-correct cells.
Aggregation aggregate_trials(const std::vector<TrialRow>& trials);

struct ComparisonRow {
    /// "all" or a transform kind name.
    std::string group;
    std::string model;
    std::size_t n = 0;
    std::optional<double> r;
    std::optional<TTestResult> t;
    std::string note;
};

/// Human-vs-model Pearson r and t(model, human) over all specs and per
/// transform family with at least two specs.
std::vector<ComparisonRow> compare_to_human(const ResponseTable& table, TTestMode mode);

/// OLS of human accuracy on the model accuracies across specs.
OlsReport human_on_models_ols(const ResponseTable& table);

struct AnalysisOptions {
    bool pearson = true;
    bool ttest = true;
    bool ols = true;
    bool rank = true;
    TTestMode mode = TTestMode::Welch;
};

/// Parses "pearson,ttest,ols,rank" (any subset).
AnalysisOptions parse_tests(std::string_view list);

nlohmann::json ols_to_json(const OlsReport& report);
nlohmann::json ranking_to_json(const RankingTable& ranking);

/// Full JSON report. Statistics that are undefined for the data are
/// reported as null with a note rather than aborting the run.
nlohmann::json build_report(const ResponseTable& table, const AnalysisOptions& options,
                            const Aggregation* aggregation = nullptr);

}  // namespace xit::stats
