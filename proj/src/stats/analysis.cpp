#include "xit/stats/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "xit/core/csv.hpp"
#include "xit/core/error.hpp"
#include "xit/core/log.hpp"

namespace xit::stats {
namespace {

template <class T>
T parse_number(const std::string& text, std::string_view what, std::size_t line) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InvalidArgument("row " + std::to_string(line) + ": invalid " + std::string(what) +
                              " '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text, std::string_view what, std::size_t line) {
    if (text == "1" || text == "true") return true;
    if (text == "0" || text == "false") return false;
    throw InvalidArgument("row " + std::to_string(line) + ": invalid " + std::string(what) + " '" +
                          text + "'");
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v && std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<TrialRow> read_trials(const std::filesystem::path& path) {
    const CsvTable csv = CsvTable::read_file(path);
    std::array<std::size_t, kTrialColumns.size()> idx{};
    for (std::size_t i = 0; i < kTrialColumns.size(); ++i) {
        idx[i] = csv.require_column(kTrialColumns[i]);
    }
    const auto phase_col = csv.column("phase");
    const auto catch_col = csv.column("catch_failed");

    std::vector<TrialRow> trials;
    std::size_t line = 1;
    for (const auto& f : csv.rows()) {
        ++line;
        if (f.size() < csv.header().size()) {
            throw InvalidArgument("row " + std::to_string(line) + ": expected " +
                                  std::to_string(csv.header().size()) + " fields");
        }
        TrialRow row;
        if (phase_col) {
            row.phase = f[*phase_col];
            if (row.phase == "practice") continue;
        }
        row.subject_id = f[idx[0]];
        row.subject_kind = f[idx[1]];
        if (!valid_subject_kind(row.subject_kind)) {
            throw InvalidArgument("row " + std::to_string(line) + ": invalid subject_kind '" +
                                  row.subject_kind + "'");
        }
        row.spec = parse_spec(f[idx[2]]);
        row.image = f[idx[3]];
        row.choice = f[idx[4]];
        row.true_class = f[idx[5]];
        row.correct = parse_bool(f[idx[6]], "correct", line);
        if (!f[idx[7]].empty()) {
            row.confidence = parse_number<int>(f[idx[7]], "confidence", line);
            if (*row.confidence < 1 || *row.confidence > 5) {
                throw InvalidArgument("row " + std::to_string(line) + ": confidence outside 1..5");
            }
        }
        if (!f[idx[8]].empty()) row.rt_ms = parse_number<double>(f[idx[8]], "rt_ms", line);
        if (catch_col && !f[*catch_col].empty()) {
            row.catch_failed = parse_bool(f[*catch_col], "catch_failed", line);
        }
        trials.push_back(std::move(row));
    }
    return trials;
}

Aggregation aggregate_trials(const std::vector<TrialRow>& trials) {
    Aggregation agg;

    // Median per-trial reaction time per human subject, in first-seen order.
    std::vector<std::string> humans;
    std::map<std::string, std::vector<double>> rts;
    std::set<std::string> catch_failed;
    for (const auto& t : trials) {
        if (t.subject_kind != kHumanKind) continue;
        if (!rts.contains(t.subject_id)) {
            humans.push_back(t.subject_id);
            rts[t.subject_id];
        }
        if (t.rt_ms) rts[t.subject_id].push_back(*t.rt_ms);
        if (t.catch_failed) catch_failed.insert(t.subject_id);
    }
    agg.catch_failed_subjects.assign(catch_failed.begin(), catch_failed.end());

    std::set<std::string> excluded;
    std::vector<std::pair<std::string, double>> summaries;
    for (const auto& id : humans) {
        if (!rts[id].empty()) summaries.emplace_back(id, median(rts[id]));
    }
    agg.rt_subjects = summaries.size();
    if (!summaries.empty() && summaries.size() < kMadMinSubjects) {
        warn("MAD filter skipped: " + std::to_string(summaries.size()) +
             " human subject(s) with reaction times, need " + std::to_string(kMadMinSubjects));
    } else if (!summaries.empty()) {
        agg.mad = mad_filter(summaries);
        excluded.insert(agg.mad->excluded.begin(), agg.mad->excluded.end());
    }

    struct Cell {
        std::size_t n = 0;
        std::size_t correct = 0;
        double conf_sum = 0.0;
        std::size_t conf_n = 0;
    };
    std::map<std::pair<std::string, std::string>, std::pair<TransformSpec, Cell>> cells;
    for (const auto& t : trials) {
        if (t.subject_kind == kHumanKind && excluded.contains(t.subject_id)) continue;
        auto& [spec, cell] = cells[{t.spec.canonical(), t.subject_kind}];
        spec = t.spec;
        ++cell.n;
        cell.correct += t.correct ? 1 : 0;
        if (t.confidence) {
            cell.conf_sum += *t.confidence;
            ++cell.conf_n;
        }
        ++agg.trials_used;
    }
    for (const auto& [key, value] : cells) {
        const auto& [spec, cell] = value;
        ResponseRow row;
        row.spec = spec;
        row.subject_kind = key.second;
        row.accuracy = 100.0 * static_cast<double>(cell.correct) / static_cast<double>(cell.n);
        if (cell.conf_n > 0) row.mean_confidence = cell.conf_sum / static_cast<double>(cell.conf_n);
        agg.table.add(std::move(row));
    }
    return agg;
}

std::vector<ComparisonRow> compare_to_human(const ResponseTable& table, TTestMode mode) {
    std::vector<ComparisonRow> out;
    const auto all_specs = table.specs();

    std::vector<std::pair<std::string, std::vector<TransformSpec>>> groups;
    groups.emplace_back("all", all_specs);
    for (int k = 0; k < kTransformKindCount; ++k) {
        const auto tk = static_cast<TransformKind>(k);
        std::vector<TransformSpec> specs;
        for (const auto& s : all_specs) {
            if (s.kind == tk) specs.push_back(s);
        }
        if (specs.size() >= 2) groups.emplace_back(std::string(kind_name(tk)), std::move(specs));
    }

    for (const auto& model : table.model_kinds()) {
        for (const auto& [name, specs] : groups) {
            ComparisonRow row;
            row.group = name;
            row.model = model;
            std::vector<TransformSpec> shared;
            for (const auto& s : specs) {
                if (table.find(s, kHumanKind) && table.find(s, model)) shared.push_back(s);
            }
            row.n = shared.size();
            if (shared.size() < 2) {
                row.note = "fewer than two shared specs";
                out.push_back(std::move(row));
                continue;
            }
            const auto human = table.accuracies(kHumanKind, shared);
            const auto net = table.accuracies(model, shared);
            try {
                row.r = pearson(human, net);
            } catch (const NumericError& e) {
                row.note = e.what();
            }
            try {
                row.t = t_test(net, human, mode);
            } catch (const NumericError& e) {
                if (!row.note.empty()) row.note += "; ";
                row.note += e.what();
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

OlsReport human_on_models_ols(const ResponseTable& table) {
    const auto models = table.model_kinds();
    if (models.empty()) throw InvalidArgument("OLS needs at least one model column");
    std::vector<TransformSpec> specs;
    for (const auto& s : table.specs()) {
        bool complete = table.find(s, kHumanKind) != nullptr;
        for (const auto& m : models) complete = complete && table.find(s, m) != nullptr;
        if (complete) specs.push_back(s);
    }
    Design design;
    for (const auto& m : models) {
        design.names.push_back(m);
        design.columns.push_back(table.accuracies(m, specs));
    }
    return ols(table.accuracies(kHumanKind, specs), design);
}

AnalysisOptions parse_tests(std::string_view list) {
    AnalysisOptions opts;
    opts.pearson = opts.ttest = opts.ols = opts.rank = false;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = std::min(list.find(',', start), list.size());
        const std::string_view name = list.substr(start, comma - start);
        if (name == "pearson") {
            opts.pearson = true;
        } else if (name == "ttest") {
            opts.ttest = true;
        } else if (name == "ols") {
            opts.ols = true;
        } else if (name == "rank") {
            opts.rank = true;
        } else {
            throw InvalidArgument("unknown test '" + std::string(name) +
                                  "' (expected pearson, ttest, ols or rank)");
        }
        start = comma + 1;
    }
    return opts;
}

nlohmann::json ols_to_json(const OlsReport& report) {
    nlohmann::json coefs = nlohmann::json::array();
    for (const auto& c : report.coefficients) {
        coefs.push_back({{"name", c.name},
                         {"coef", number_or_null(c.coef)},
                         {"std_err", number_or_null(c.std_err)},
                         {"t_value", number_or_null(c.t_value)},
                         {"p_value", number_or_null(c.p_value)},
                         {"ci_low", number_or_null(c.ci_low)},
                         {"ci_high", number_or_null(c.ci_high)}});
    }
    return {{"coefficients", coefs},
            {"r2_uncentered", number_or_null(report.r2_uncentered)},
            {"adj_r2_uncentered", number_or_null(report.adj_r2_uncentered)},
            {"f_stat", number_or_null(report.f_stat)},
            {"f_pvalue", number_or_null(report.f_pvalue)},
            {"log_likelihood", number_or_null(report.log_likelihood)},
            {"aic", number_or_null(report.aic)},
            {"bic", number_or_null(report.bic)},
            {"durbin_watson", number_or_null(report.durbin_watson)},
            {"jarque_bera", number_or_null(report.jarque_bera)},
            {"jb_pvalue", number_or_null(report.jb_pvalue)},
            {"skew", number_or_null(report.skew)},
            {"kurtosis", number_or_null(report.kurtosis)},
            {"cond_number", number_or_null(report.cond_number)},
            {"n_obs", report.n_obs},
            {"df_resid", report.df_resid}};
}

nlohmann::json ranking_to_json(const RankingTable& ranking) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : ranking.rows) {
        rows.push_back({{"item", r.item},
                        {"subject_kind", r.subject_kind},
                        {"mean_accuracy", r.mean_accuracy},
                        {"difficulty", r.difficulty},
                        {"rank", r.rank}});
    }
    return {{"level", rank_level_name(ranking.level)}, {"rows", rows}};
}

nlohmann::json build_report(const ResponseTable& table, const AnalysisOptions& options,
                            const Aggregation* aggregation) {
    if (table.empty()) throw InvalidArgument("cannot build a report from an empty table");
    nlohmann::json report;
    report["subject_kinds"] = table.subject_kinds();

    nlohmann::json accuracy = nlohmann::json::array();
    for (const auto& row : table.rows()) {
        accuracy.push_back({{"spec", row.spec.canonical()},
                            {"subject_kind", row.subject_kind},
                            {"accuracy", row.accuracy},
                            {"mean_confidence", optional_number(row.mean_confidence)}});
    }
    report["accuracy"] = accuracy;

    if (aggregation != nullptr) {
        nlohmann::json filt;
        filt["trials_used"] = aggregation->trials_used;
        filt["catch_failed_subjects"] = aggregation->catch_failed_subjects;
        filt["applied"] = aggregation->mad.has_value();
        filt["rt_subjects"] = aggregation->rt_subjects;
        if (aggregation->mad) {
            const auto& m = *aggregation->mad;
            filt["statistic"] = "median_rt_ms";
            filt["median"] = m.median;
            filt["mad"] = m.mad;
            filt["threshold"] = m.threshold;
            filt["retained"] = m.retained;
            filt["excluded"] = m.excluded;
            filt["degenerate"] = m.degenerate;
        }
        report["mad_filter"] = filt;
    }

    const auto kinds = table.subject_kinds();
    const bool has_human = !kinds.empty() && kinds.front() == kHumanKind;

    if ((options.pearson || options.ttest) && has_human) {
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : compare_to_human(table, options.mode)) {
            nlohmann::json j = {{"group", c.group}, {"model", c.model}, {"n", c.n}};
            if (options.pearson) j["r"] = c.r ? nlohmann::json(*c.r) : nlohmann::json(nullptr);
            if (options.ttest) {
                if (c.t) {
                    j["t"] = c.t->t;
                    j["p"] = c.t->p;
                    j["df"] = c.t->df;
                } else {
                    j["t"] = j["p"] = j["df"] = nullptr;
                }
            }
            if (!c.note.empty()) j["note"] = c.note;
            comps.push_back(std::move(j));
        }
        report["comparisons"] = comps;
        if (options.ttest) report["ttest_mode"] = ttest_mode_name(options.mode);
    }

    if (options.ols) {
        try {
            report["ols"] = ols_to_json(human_on_models_ols(table));
            report["ols"]["dependent"] = kHumanKind;
        } catch (const std::exception& e) {
            warn(std::string("OLS skipped: ") + e.what());
            report["ols"] = {{"error", e.what()}};
        }
    }

    if (options.rank) {
        report["ranking"] = {
            {"transform", ranking_to_json(difficulty_ranking(table, RankLevel::Transform))},
            {"parameter_pair",
             ranking_to_json(difficulty_ranking(table, RankLevel::ParameterPair))}};
    }

    std::vector<double> acc, conf;
    for (const auto& row : table.rows()) {
        if (row.subject_kind == kHumanKind && row.mean_confidence) {
            acc.push_back(row.accuracy);
            conf.push_back(*row.mean_confidence);
        }
    }
    if (acc.size() >= 2) {
        try {
            const LineFit fit = confidence_accuracy_fit(acc, conf);
            report["confidence_fit"] = {
                {"slope", fit.slope}, {"intercept", fit.intercept}, {"r", fit.r}};
        } catch (const NumericError& e) {
            report["confidence_fit"] = {{"error", e.what()}};
        }
    }
    return report;
}

}  // namespace xit::stats
