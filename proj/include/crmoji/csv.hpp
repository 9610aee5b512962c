#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace crmoji::csv {

struct Row {
  std::size_t line = 0;  // 1-based line in the source file
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

/// Resource tables: comma-split with no quoting; the six characters
/// backslash-u-002C in a field stand for a literal comma. Blank lines are
/// skipped, a UTF-8 BOM and trailing CR are tolerated. Throws LoadError if the
/// file cannot be opened.
Table read_plain(const std::string& path);
Table parse_plain(std::string_view content, const std::string& origin);

/// RFC 4180: quoted fields may hold commas, doubled quotes and newlines.
Table read_rfc4180(const std::string& path);
Table parse_rfc4180(std::string_view content, const std::string& origin);

std::string unescape_commas(std::string_view field);

/// Quotes a field only when it needs it.
std::string quote(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Index of `name` in `header`, or -1.
int column(const std::vector<std::string>& header, std::string_view name);

std::string read_file(const std::string& path);

}  // namespace crmoji::csv
