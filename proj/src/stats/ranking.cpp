#include "xit/stats/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "xit/core/error.hpp"

namespace xit::stats {

std::string_view rank_level_name(RankLevel level) {
    return level == RankLevel::Transform ? "transform" : "parameter_pair";
}

RankLevel parse_rank_level(std::string_view name) {
    if (name == "transform") return RankLevel::Transform;
    if (name == "parameter_pair") return RankLevel::ParameterPair;
    throw InvalidArgument("unknown ranking level '" + std::string(name) + "'");
}

std::optional<int> RankingTable::rank_of(std::string_view item,
                                         std::string_view subject_kind) const {
    for (const auto& row : rows) {
        if (row.item == item && row.subject_kind == subject_kind) return row.rank;
    }
    return std::nullopt;
}

RankingTable difficulty_ranking(const ResponseTable& table, RankLevel level) {
    if (table.empty()) throw InvalidArgument("difficulty_ranking needs a non-empty table");

    RankingTable result;
    result.level = level;
    const auto specs = table.specs();

    for (const auto& kind : table.subject_kinds()) {
        std::vector<RankingRow> group;
        if (level == RankLevel::ParameterPair) {
            for (const auto& spec : specs) {
                if (const ResponseRow* row = table.find(spec, kind)) {
                    group.push_back({spec.canonical(), kind, row->accuracy, 0.0, 0});
                }
            }
        } else {
            for (int k = 0; k < kTransformKindCount; ++k) {
                const auto tk = static_cast<TransformKind>(k);
                double sum = 0.0;
                int count = 0;
                for (const auto& spec : specs) {
                    if (spec.kind != tk) continue;
                    if (const ResponseRow* row = table.find(spec, kind)) {
                        sum += row->accuracy;
                        ++count;
                    }
                }
                if (count > 0) {
                    group.push_back({std::string(kind_name(tk)), kind, sum / count, 0.0, 0});
                }
            }
        }

        std::vector<std::size_t> order(group.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return group[a].mean_accuracy > group[b].mean_accuracy;
        });
        for (std::size_t r = 0; r < order.size(); ++r) {
            group[order[r]].rank = static_cast<int>(r) + 1;
        }
        for (auto& row : group) {
            row.difficulty = 100.0 - row.mean_accuracy;
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

}  // namespace xit::stats
