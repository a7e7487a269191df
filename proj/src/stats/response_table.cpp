#include "xit/stats/response_table.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <tuple>

#include "xit/core/csv.hpp"
#include "xit/core/error.hpp"

namespace xit::stats {
namespace {

double parse_double(const std::string& text, std::string_view what) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw InvalidArgument("invalid " + std::string(what) + " '" + text + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

bool valid_subject_kind(std::string_view kind) {
    if (kind == kHumanKind) return true;
    return kind.starts_with(kModelPrefix) && kind.size() > kModelPrefix.size();
}

bool spec_order_less(const TransformSpec& a, const TransformSpec& b) {
    const auto key = [](const TransformSpec& s) {
        return std::make_tuple(static_cast<int>(s.kind), s.probability.value_or(0.0),
                               s.block_size.value_or(0), s.segments.value_or(0));
    };
    return key(a) < key(b);
}

void ResponseTable::add(ResponseRow row) {
    row.spec.validate();
    if (!valid_subject_kind(row.subject_kind)) {
        throw InvalidArgument("invalid subject_kind '" + row.subject_kind +
                              "' (expected human or model:NAME)");
    }
    if (!(row.accuracy >= 0.0 && row.accuracy <= 100.0)) {
        throw InvalidArgument("accuracy for " + row.spec.canonical() + "/" + row.subject_kind +
                              " is outside [0, 100]");
    }
    if (row.mean_confidence && !(*row.mean_confidence >= 1.0 && *row.mean_confidence <= 5.0)) {
        throw InvalidArgument("mean_confidence for " + row.spec.canonical() + "/" +
                              row.subject_kind + " is outside [1, 5]");
    }
    if (find(row.spec, row.subject_kind) != nullptr) {
        throw InvalidArgument("duplicate row for " + row.spec.canonical() + "/" + row.subject_kind);
    }
    rows_.push_back(std::move(row));
}

std::vector<TransformSpec> ResponseTable::specs() const {
    std::vector<TransformSpec> out;
    for (const auto& row : rows_) {
        if (std::find(out.begin(), out.end(), row.spec) == out.end()) out.push_back(row.spec);
    }
    std::stable_sort(out.begin(), out.end(), spec_order_less);
    return out;
}

std::vector<std::string> ResponseTable::subject_kinds() const {
    std::set<std::string> models;
    bool human = false;
    for (const auto& row : rows_) {
        if (row.subject_kind == kHumanKind) {
            human = true;
        } else {
            models.insert(row.subject_kind);
        }
    }
    std::vector<std::string> out;
    if (human) out.emplace_back(kHumanKind);
    out.insert(out.end(), models.begin(), models.end());
    return out;
}

std::vector<std::string> ResponseTable::model_kinds() const {
    auto kinds = subject_kinds();
    std::erase(kinds, std::string(kHumanKind));
    return kinds;
}

const ResponseRow* ResponseTable::find(const TransformSpec& spec, std::string_view kind) const {
    for (const auto& row : rows_) {
        if (row.spec == spec && row.subject_kind == kind) return &row;
    }
    return nullptr;
}

std::vector<double> ResponseTable::accuracies(std::string_view kind,
                                              const std::vector<TransformSpec>& specs) const {
    std::vector<double> out;
    out.reserve(specs.size());
    for (const auto& spec : specs) {
        const ResponseRow* row = find(spec, kind);
        if (row == nullptr) {
            throw InvalidArgument("no accuracy for " + spec.canonical() + "/" + std::string(kind));
        }
        out.push_back(row->accuracy);
    }
    return out;
}

ResponseTable ResponseTable::read_csv(const std::filesystem::path& path) {
    const CsvTable csv = CsvTable::read_file(path);
    const std::size_t spec_col = csv.require_column("spec");
    const std::size_t kind_col = csv.require_column("subject_kind");
    const std::size_t acc_col = csv.require_column("accuracy");
    const auto conf_col = csv.column("mean_confidence");

    ResponseTable table;
    for (const auto& fields : csv.rows()) {
        ResponseRow row;
        row.spec = parse_spec(fields.at(spec_col));
        row.subject_kind = fields.at(kind_col);
        row.accuracy = parse_double(fields.at(acc_col), "accuracy");
        if (conf_col && !fields.at(*conf_col).empty()) {
            row.mean_confidence = parse_double(fields.at(*conf_col), "mean_confidence");
        }
        table.add(std::move(row));
    }
    return table;
}

void ResponseTable::write_csv(std::ostream& out) const {
    out << "spec,subject_kind,accuracy,mean_confidence\n";
    for (const auto& row : rows_) {
        out << csv_join({row.spec.canonical(), row.subject_kind, format_double(row.accuracy),
                         row.mean_confidence ? format_double(*row.mean_confidence) : ""})
            << '\n';
    }
}

}  // namespace xit::stats
