#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xit/core/transform_spec.hpp"

namespace xit::stats {

inline constexpr std::string_view kHumanKind = "human";
inline constexpr std::string_view kModelPrefix = "model:";

/// Accepts "human" or "model:NAME" with a non-empty name.
bool valid_subject_kind(std::string_view kind);

/// Sweep order: kind, then probability, block size, segment count.
bool spec_order_less(const TransformSpec& a, const TransformSpec& b);

struct ResponseRow {
    TransformSpec spec;
    std::string subject_kind;
    double accuracy = 0.0;  // percent
    std::optional<double> mean_confidence;
};

/// Per (spec, subject_kind) accuracy table.
class ResponseTable {
public:
    /// Throws InvalidArgument on a duplicate (spec, subject_kind), an
    /// accuracy outside [0, 100], a confidence outside [1, 5] or a bad kind.
    void add(ResponseRow row);

    const std::vector<ResponseRow>& rows() const { return rows_; }
    bool empty() const { return rows_.empty(); }

    /// Distinct specs in sweep order.
    std::vector<TransformSpec> specs() const;
    /// "human" first when present, then models in name order.
    std::vector<std::string> subject_kinds() const;
    std::vector<std::string> model_kinds() const;

    const ResponseRow* find(const TransformSpec& spec, std::string_view kind) const;
    /// Accuracies of one subject kind over `specs`; throws InvalidArgument
    /// naming the first missing cell.
    std::vector<double> accuracies(std::string_view kind,
                                   const std::vector<TransformSpec>& specs) const;

    /// Columns spec,subject_kind,accuracy[,mean_confidence].
    static ResponseTable read_csv(const std::filesystem::path& path);
    void write_csv(std::ostream& out) const;

private:
    std::vector<ResponseRow> rows_;
};

}  // namespace xit::stats
