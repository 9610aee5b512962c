#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crmoji/emoji_codec.hpp"

namespace crmoji {

struct CommentRecord {
  std::string id;
  std::string text;
  int useful = 0;
  std::optional<int> sentiment;  // -1, 0, 1
  std::string source;
  std::optional<std::string> provenance;  // set by augmentation

  friend bool operator==(const CommentRecord&, const CommentRecord&) = default;
};

struct Manifest {
  std::string name;
  std::size_t size = 0;
  std::size_t emoji_comment_count = 0;
  std::size_t useful_count = 0;
  std::size_t not_useful_count = 0;
  std::size_t empty_text_count = 0;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct Dataset {
  std::vector<CommentRecord> records;
  Manifest manifest;

  const std::string& name() const noexcept { return manifest.name; }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class DatasetFormat { Csv, Jsonl };

/// .jsonl/.ndjson/.json are JSONL, anything else CSV.
DatasetFormat format_for_path(const std::string& path);

/// File name without directory and extension.
std::string dataset_name_for_path(const std::string& path);

/// Validates ids and labels and computes the manifest. Records with an empty
/// source get `name`. Throws ValidationError on a duplicate id.
Dataset make_dataset(std::string name, std::vector<CommentRecord> records, const CodecTables& tables);

/// Column names are matched case-insensitively with common aliases
/// (comment/message/body for text, label/is_useful for useful, ...).
/// useful accepts 0/1, true/false, yes/no, useful/not_useful; sentiment
/// accepts -1/0/1 and negative/neutral/positive. Errors carry the line.
Dataset load_dataset(const std::string& path, DatasetFormat format, const CodecTables& tables,
                     std::string name = {});
inline Dataset load_dataset(const std::string& path, const CodecTables& tables) {
  return load_dataset(path, format_for_path(path), tables);
}

/// Canonical columns `id,text,useful,sentiment,source` plus `provenance`
/// when any record has one.
void write_dataset(const Dataset& dataset, const std::string& path, DatasetFormat format);

/// Records with at least one emoji after normalization, in input order.
Dataset filter_emoji_only(std::span<const Dataset> datasets, const CodecTables& tables, std::string name = "D_all");

std::string manifest_json(const Manifest& manifest);
/// Writes `<dir>/<name>.manifest.json` and returns its path.
std::string write_manifest(const Manifest& manifest, const std::string& dir);

}  // namespace crmoji
