#include "crmoji/csv.hpp"

#include <fstream>
#include <sstream>

#include "crmoji/error.hpp"

namespace crmoji::csv {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";
constexpr std::string_view kEscapedComma = "\\u002C";

std::string_view strip_bom(std::string_view content) {
  if (content.substr(0, kBom.size()) == kBom) content.remove_prefix(kBom.size());
  return content;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path, 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::string unescape_commas(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  std::size_t pos = 0;
  while (pos < field.size()) {
    const auto hit = field.find(kEscapedComma, pos);
    if (hit == std::string_view::npos) {
      out.append(field.substr(pos));
      break;
    }
    out.append(field.substr(pos, hit - pos));
    out.push_back(',');
    pos = hit + kEscapedComma.size();
  }
  return out;
}

Table parse_plain(std::string_view content, const std::string& origin) {
  content = strip_bom(content);
  Table table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    auto line = content.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (eol == content.size()) break;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(unescape_commas(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back({line_no, std::move(fields)});
    }
    if (eol == content.size()) break;
  }
  (void)origin;
  return table;
}

Table read_plain(const std::string& path) { return parse_plain(read_file(path), path); }

Table parse_rfc4180(std::string_view content, const std::string& origin) {
  content = strip_bom(content);
  Table table;
  bool have_header = false;
  std::size_t line_no = 1;
  std::size_t pos = 0;
  const std::size_t n = content.size();

  while (pos < n) {
    const std::size_t record_line = line_no;
    std::vector<std::string> fields;
    std::string field;
    bool record_done = false;
    bool blank = true;
    while (!record_done) {
      field.clear();
      if (pos < n && content[pos] == '"') {
        blank = false;
        ++pos;
        bool closed = false;
        while (pos < n) {
          const char c = content[pos];
          if (c == '"') {
            if (pos + 1 < n && content[pos + 1] == '"') {
              field.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            closed = true;
            break;
          }
          if (c == '\n') ++line_no;
          field.push_back(c);
          ++pos;
        }
        if (!closed) throw LoadError(origin, record_line, "unterminated quoted field");
        if (pos < n && content[pos] != ',' && content[pos] != '\n' && content[pos] != '\r') {
          throw LoadError(origin, line_no, "unexpected character after closing quote");
        }
      } else {
        while (pos < n && content[pos] != ',' && content[pos] != '\n') {
          field.push_back(content[pos]);
          ++pos;
        }
        if (!field.empty() && field.back() == '\r' && (pos >= n || content[pos] == '\n')) field.pop_back();
        if (!field.empty()) blank = false;
      }
      fields.push_back(field);
      if (pos < n && content[pos] == '\r') ++pos;
      if (pos >= n) {
        record_done = true;
      } else if (content[pos] == ',') {
        blank = false;
        ++pos;
      } else {
        ++pos;  // '\n'
        ++line_no;
        record_done = true;
      }
    }
    if (blank && fields.size() == 1) continue;
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      table.rows.push_back({record_line, std::move(fields)});
    }
  }
  return table;
}

Table read_rfc4180(const std::string& path) { return parse_rfc4180(read_file(path), path); }

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << quote(fields[i]);
  }
  out << '\n';
}

int column(const std::vector<std::string>& header, std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace crmoji::csv
