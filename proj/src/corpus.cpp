#include "crmoji/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "crmoji/csv.hpp"
#include "crmoji/error.hpp"
#include "crmoji/text.hpp"

namespace crmoji {

namespace fs = std::filesystem;
using json = nlohmann::json;

DatasetFormat format_for_path(const std::string& path) {
  const auto ext = text::ascii_lower(fs::path(path).extension().string());
  return ext == ".jsonl" || ext == ".ndjson" || ext == ".json" ? DatasetFormat::Jsonl : DatasetFormat::Csv;
}

std::string dataset_name_for_path(const std::string& path) { return fs::path(path).stem().string(); }

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<int> parse_useful(std::string_view raw) {
  const auto v = text::ascii_lower(trim(raw));
  if (v == "1" || v == "true" || v == "yes" || v == "useful") return 1;
  if (v == "0" || v == "false" || v == "no" || v == "not_useful" || v == "not useful" || v == "notuseful") return 0;
  return std::nullopt;
}

// nullopt inside: empty field. Outer nullopt: bad value.
std::optional<std::optional<int>> parse_sentiment(std::string_view raw) {
  const auto v = text::ascii_lower(trim(raw));
  if (v.empty()) return std::optional<int>{};
  if (v == "-1" || v == "negative" || v == "neg") return std::optional<int>{-1};
  if (v == "0" || v == "neutral" || v == "neu") return std::optional<int>{0};
  if (v == "1" || v == "+1" || v == "positive" || v == "pos") return std::optional<int>{1};
  return std::nullopt;
}

const std::vector<std::string>& aliases(std::string_view field) {
  static const std::vector<std::string> id{"id", "comment_id", "commentid", "uid"};
  static const std::vector<std::string> text{"text", "comment", "message", "body", "comment_text", "content"};
  static const std::vector<std::string> useful{"useful", "usefulness", "is_useful", "label", "useful_label", "class"};
  static const std::vector<std::string> sentiment{"sentiment", "polarity", "sentiment_label"};
  static const std::vector<std::string> source{"source", "dataset", "project"};
  static const std::vector<std::string> provenance{"provenance"};
  if (field == "id") return id;
  if (field == "text") return text;
  if (field == "useful") return useful;
  if (field == "sentiment") return sentiment;
  if (field == "source") return source;
  return provenance;
}

int find_column(const std::vector<std::string>& header, std::string_view field) {
  for (const auto& alias : aliases(field)) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::ascii_lower(trim(header[i])) == alias) return static_cast<int>(i);
    }
  }
  return -1;
}

std::vector<CommentRecord> read_csv_records(const std::string& path) {
  const auto table = csv::read_rfc4180(path);
  const int c_id = find_column(table.header, "id");
  const int c_text = find_column(table.header, "text");
  const int c_useful = find_column(table.header, "useful");
  const int c_sent = find_column(table.header, "sentiment");
  const int c_source = find_column(table.header, "source");
  const int c_prov = find_column(table.header, "provenance");
  if (c_text < 0) throw LoadError(path, 1, "no text column");
  if (c_useful < 0) throw LoadError(path, 1, "no useful column");

  std::vector<CommentRecord> out;
  out.reserve(table.rows.size());
  std::size_t ordinal = 0;
  for (const auto& row : table.rows) {
    ++ordinal;
    auto field = [&](int c) -> std::string { return c >= 0 && c < static_cast<int>(row.fields.size()) ? row.fields[c] : ""; };
    CommentRecord r;
    r.id = c_id >= 0 ? trim(field(c_id)) : std::to_string(ordinal);
    if (r.id.empty()) throw LoadError(path, row.line, "empty id");
    r.text = field(c_text);
    const auto useful = parse_useful(field(c_useful));
    if (!useful) throw LoadError(path, row.line, "missing or bad useful label '" + field(c_useful) + "'");
    r.useful = *useful;
    if (c_sent >= 0) {
      const auto s = parse_sentiment(field(c_sent));
      if (!s) throw LoadError(path, row.line, "bad sentiment value '" + field(c_sent) + "'");
      r.sentiment = *s;
    }
    if (c_source >= 0) r.source = trim(field(c_source));
    if (c_prov >= 0 && !field(c_prov).empty()) r.provenance = field(c_prov);
    out.push_back(std::move(r));
  }
  return out;
}

std::string scalar_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  return {};
}

const json* find_key(const json& obj, std::string_view field) {
  for (const auto& alias : aliases(field)) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (text::ascii_lower(it.key()) == alias) return &it.value();
    }
  }
  return nullptr;
}

std::vector<CommentRecord> read_jsonl_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path, 0, "cannot open file");
  std::vector<CommentRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw LoadError(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw LoadError(path, line_no, "expected a JSON object");

    CommentRecord r;
    const json* id = find_key(obj, "id");
    r.id = id ? trim(scalar_string(*id)) : std::to_string(out.size() + 1);
    if (r.id.empty()) throw LoadError(path, line_no, "empty id");
    if (const json* t = find_key(obj, "text"); t && !t->is_null()) {
      if (!t->is_string()) throw LoadError(path, line_no, "text must be a string");
      r.text = t->get<std::string>();
    }
    const json* u = find_key(obj, "useful");
    const auto useful = u ? parse_useful(scalar_string(*u)) : std::nullopt;
    if (!useful) throw LoadError(path, line_no, "missing or bad useful label");
    r.useful = *useful;
    if (const json* s = find_key(obj, "sentiment"); s && !s->is_null()) {
      const auto v = parse_sentiment(scalar_string(*s));
      if (!v) throw LoadError(path, line_no, "bad sentiment value " + s->dump());
      r.sentiment = *v;
    }
    if (const json* s = find_key(obj, "source"); s && !s->is_null()) r.source = trim(scalar_string(*s));
    if (const json* p = find_key(obj, "provenance"); p && p->is_string() && !p->get<std::string>().empty()) {
      r.provenance = p->get<std::string>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

Dataset make_dataset(std::string name, std::vector<CommentRecord> records, const CodecTables& tables) {
  Dataset d;
  d.manifest.name = std::move(name);
  std::unordered_set<std::string> seen;
  for (auto& r : records) {
    if (!seen.insert(r.id).second) throw ValidationError("duplicate id '" + r.id + "' in " + d.manifest.name);
    if (r.useful != 0 && r.useful != 1) throw ValidationError("useful label of '" + r.id + "' must be 0 or 1");
    if (r.sentiment && (*r.sentiment < -1 || *r.sentiment > 1)) {
      throw ValidationError("sentiment of '" + r.id + "' must be -1, 0 or 1");
    }
    if (r.source.empty()) r.source = d.manifest.name;
    (r.useful ? d.manifest.useful_count : d.manifest.not_useful_count)++;
    if (trim(r.text).empty()) ++d.manifest.empty_text_count;
    if (!normalize_comment(r.text, tables).tokens.empty()) ++d.manifest.emoji_comment_count;
  }
  d.manifest.size = records.size();
  d.records = std::move(records);
  return d;
}

Dataset load_dataset(const std::string& path, DatasetFormat format, const CodecTables& tables, std::string name) {
  auto records = format == DatasetFormat::Csv ? read_csv_records(path) : read_jsonl_records(path);
  if (name.empty()) name = dataset_name_for_path(path);
  try {
    return make_dataset(std::move(name), std::move(records), tables);
  } catch (const ValidationError& e) {
    throw LoadError(path, 0, e.what());
  }
}

void write_dataset(const Dataset& dataset, const std::string& path, DatasetFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  bool with_provenance = false;
  for (const auto& r : dataset.records) with_provenance |= r.provenance.has_value();

  if (format == DatasetFormat::Csv) {
    std::vector<std::string> header{"id", "text", "useful", "sentiment", "source"};
    if (with_provenance) header.push_back("provenance");
    csv::write_row(out, header);
    for (const auto& r : dataset.records) {
      std::vector<std::string> row{r.id, r.text, std::to_string(r.useful),
                                   r.sentiment ? std::to_string(*r.sentiment) : std::string(), r.source};
      if (with_provenance) row.push_back(r.provenance.value_or(""));
      csv::write_row(out, row);
    }
  } else {
    for (const auto& r : dataset.records) {
      json obj = {{"id", r.id}, {"text", r.text}, {"useful", r.useful}};
      obj["sentiment"] = r.sentiment ? json(*r.sentiment) : json(nullptr);
      obj["source"] = r.source;
      if (r.provenance) obj["provenance"] = *r.provenance;
      out << obj.dump() << '\n';
    }
  }
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

Dataset filter_emoji_only(std::span<const Dataset> datasets, const CodecTables& tables, std::string name) {
  std::vector<CommentRecord> records;
  std::unordered_set<std::string> ids;
  for (const auto& d : datasets) {
    for (const auto& r : d.records) {
      if (normalize_comment(r.text, tables).tokens.empty()) continue;
      CommentRecord copy = r;
      // ids only need to be unique within a dataset; qualify clashes
      if (!ids.insert(copy.id).second) {
        copy.id = copy.source + ":" + copy.id;
        ids.insert(copy.id);
      }
      records.push_back(std::move(copy));
    }
  }
  return make_dataset(std::move(name), std::move(records), tables);
}

std::string manifest_json(const Manifest& m) {
  json j = {{"name", m.name},
            {"size", m.size},
            {"emoji_comment_count", m.emoji_comment_count},
            {"class_balance", {{"useful", m.useful_count}, {"not_useful", m.not_useful_count}}},
            {"empty_text_count", m.empty_text_count}};
  return j.dump(2);
}

std::string write_manifest(const Manifest& manifest, const std::string& dir) {
  const auto path = (fs::path(dir) / (manifest.name + ".manifest.json")).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << manifest_json(manifest) << '\n';
  return path;
}

}  // namespace crmoji
