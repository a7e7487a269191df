#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xit/stats/response_table.hpp"

namespace xit::stats {

enum class RankLevel { Transform, ParameterPair };

std::string_view rank_level_name(RankLevel level);
RankLevel parse_rank_level(std::string_view name);

struct RankingRow {
    /// kind_name() at transform level, canonical spec at parameter-pair level.
    std::string item;
    std::string subject_kind;
    double mean_accuracy = 0.0;
    double difficulty = 0.0;  // 100 - mean_accuracy
    int rank = 0;
};

struct RankingTable {
    RankLevel level = RankLevel::Transform;
    /// Grouped by subject kind, items in canonical order within each group.
    std::vector<RankingRow> rows;

    std::optional<int> rank_of(std::string_view item, std::string_view subject_kind) const;
};

/// Ranks 1..n per subject kind by descending mean accuracy; ties keep
/// canonical order.
RankingTable difficulty_ranking(const ResponseTable& table, RankLevel level);

}  // namespace xit::stats
