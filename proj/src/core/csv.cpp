#include "xit/core/csv.hpp"

#include <fstream>

#include "xit/core/error.hpp"

namespace xit {
namespace {

// Reads one record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    if (in.peek() == std::char_traits<char>::eof()) {
        return false;
    }
    std::string field;
    bool quoted = false;
    char ch = 0;
    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch != '\r') {
            field += ch;
        }
    }
    if (quoted) {
        throw InvalidArgument("unterminated quoted CSV field");
    }
    fields.push_back(std::move(field));
    return true;
}

bool blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && fields.front().empty();
}

}  // namespace

CsvTable CsvTable::parse(std::istream& in, bool has_header) {
    CsvTable table;
    std::vector<std::string> fields;
    bool first = true;
    while (read_record(in, fields)) {
        if (blank(fields)) continue;
        if (first && has_header) {
            table.header_ = fields;
        } else {
            table.rows_.push_back(fields);
        }
        first = false;
    }
    return table;
}

CsvTable CsvTable::read_file(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return parse(in, has_header);
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (header_[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
    if (auto idx = column(name)) return *idx;
    throw InvalidArgument("CSV is missing column '" + std::string(name) + "'");
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (const char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(fields[i]);
    }
    return line;
}

}  // namespace xit
