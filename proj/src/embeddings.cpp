#include "crmoji/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "crmoji/error.hpp"
#include "crmoji/text.hpp"

namespace crmoji {

VectorTable::VectorTable(std::size_t dim, VectorKind kind) : dim_(dim), kind_(kind) {
  if (dim == 0) throw ValidationError("vector dimension must be positive");
}

std::string VectorTable::key(std::string_view token) const {
  return kind_ == VectorKind::Emoji ? presentation_insensitive_key(token) : std::string(token);
}

bool VectorTable::insert(std::string_view token, std::span<const float> values) {
  if (values.size() != dim_) throw ValidationError("vector for '" + std::string(token) + "' has wrong dimension");
  for (float v : values) {
    if (!std::isfinite(v)) throw ValidationError("non-finite component for '" + std::string(token) + "'");
  }
  auto [it, fresh] = index_.try_emplace(key(token), data_.size());
  if (fresh) {
    data_.insert(data_.end(), values.begin(), values.end());
  } else {
    std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second));
  }
  return fresh;
}

std::optional<std::span<const float>> VectorTable::find(std::string_view token) const {
  auto it = index_.find(key(token));
  if (it == index_.end()) return std::nullopt;
  return std::span<const float>(data_.data() + it->second, dim_);
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) parts.push_back(line.substr(start, pos - start));
  }
  return parts;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

VectorTable load_vectors(const std::string& path, VectorKind kind, VectorLoadWarnings* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path, 0, "cannot open file");

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw LoadError(path, 1, "missing header");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_spaces(line);
  std::size_t declared = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], declared) || !parse_number(header[1], dim) || dim == 0) {
    throw LoadError(path, 1, "header must be '<count> <dim>'");
  }

  VectorTable table(dim, kind);
  VectorLoadWarnings local;
  local.declared_count = declared;
  std::vector<float> values(dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto parts = split_spaces(line);
    if (parts.empty()) continue;
    if (parts.size() != dim + 1) {
      throw LoadError(path, line_no,
                      "expected " + std::to_string(dim) + " values, found " + std::to_string(parts.size() - 1));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_number(parts[i + 1], values[i]) || !std::isfinite(values[i])) {
        throw LoadError(path, line_no, "bad value '" + std::string(parts[i + 1]) + "'");
      }
    }
    if (!table.insert(parts[0], values)) ++local.duplicates;
    ++local.rows;
  }
  if (warnings) *warnings = local;
  return table;
}

TextEmbedding embed_text(const NormalizedComment& nc, const VectorTable& words, Aggregation aggregation) {
  TextEmbedding out;
  out.vec.assign(words.dim(), 0.0);
  std::size_t hits = 0;
  for (const auto& token : text::word_tokens(nc.stripped)) {
    const auto v = words.find(token);
    if (!v) {
      ++out.oov;
      continue;
    }
    for (std::size_t i = 0; i < v->size(); ++i) out.vec[i] += (*v)[i];
    ++hits;
  }
  if (aggregation == Aggregation::Mean && hits > 0) {
    for (double& x : out.vec) x /= static_cast<double>(hits);
  }
  return out;
}

EmojiEmbedding embed_emojis(std::span<const EmojiToken> tokens, const VectorTable& emojis, Aggregation aggregation) {
  EmojiEmbedding out;
  out.vec.assign(emojis.dim(), 0.0);
  std::size_t hits = 0;
  for (const auto& token : tokens) {
    const auto v = emojis.find(token.glyph);
    if (!v) {
      ++out.unmatched;
      continue;
    }
    for (std::size_t i = 0; i < v->size(); ++i) out.vec[i] += (*v)[i];
    ++hits;
  }
  if (aggregation == Aggregation::Mean && hits > 0) {
    for (double& x : out.vec) x /= static_cast<double>(hits);
  }
  return out;
}

std::vector<double> fuse(std::span<const double> text_vec, std::span<const double> emoji_vec, std::size_t text_dim,
                         std::size_t emoji_dim) {
  if (text_vec.size() != text_dim) throw ValidationError("text vector dimension mismatch");
  if (emoji_vec.size() != emoji_dim) throw ValidationError("emoji vector dimension mismatch");
  std::vector<double> fused;
  fused.reserve(text_dim + emoji_dim);
  fused.insert(fused.end(), text_vec.begin(), text_vec.end());
  fused.insert(fused.end(), emoji_vec.begin(), emoji_vec.end());
  return fused;
}

CommentEmbedding embed_comment(const NormalizedComment& nc, const VectorTable& words, const VectorTable& emojis,
                               Aggregation aggregation) {
  CommentEmbedding e;
  auto t = embed_text(nc, words, aggregation);
  auto m = embed_emojis(nc.tokens, emojis, aggregation);
  e.fused = fuse(t.vec, m.vec, words.dim(), emojis.dim());
  e.text_vec = std::move(t.vec);
  e.emoji_vec = std::move(m.vec);
  e.oov_words = t.oov;
  e.unmatched_emojis = m.unmatched;
  return e;
}

}  // namespace crmoji
