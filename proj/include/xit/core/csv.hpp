#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xit {

/// Minimal RFC 4180 reader/writer: comma separated, double-quote escaping,
/// LF or CRLF line ends.
class CsvTable {
public:
    static CsvTable parse(std::istream& in, bool has_header = true);
    static CsvTable read_file(const std::filesystem::path& path, bool has_header = true);

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    /// Column index by header name, if present.
    std::optional<std::size_t> column(std::string_view name) const;
    /// Column index by header name; throws InvalidArgument naming the column.
    std::size_t require_column(std::string_view name) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

}  // namespace xit
