#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crmoji/emoji_codec.hpp"
#include "crmoji/sentiment.hpp"

namespace crmoji {

enum class VectorKind { Word, Emoji };

/// Pre-trained vectors keyed by token. Emoji keys ignore presentation
/// selectors. Components are stored as float; arithmetic is done in double.
class VectorTable {
 public:
  VectorTable(std::size_t dim, VectorKind kind);

  std::size_t dim() const noexcept { return dim_; }
  VectorKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return index_.size(); }

  /// Replaces an existing entry (last wins). Returns false on replacement.
  bool insert(std::string_view token, std::span<const float> values);
  std::optional<std::span<const float>> find(std::string_view token) const;

 private:
  std::string key(std::string_view token) const;

  std::size_t dim_;
  VectorKind kind_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

struct VectorLoadWarnings {
  std::size_t duplicates = 0;
  std::size_t declared_count = 0;
  std::size_t rows = 0;

  bool count_mismatch() const noexcept { return declared_count != rows; }
};

/// Text vector format: header `<count> <dim>`, then `<token> v1 ... vdim`.
/// Throws LoadError on arity mismatch or non-finite values. A wrong header
/// count and duplicate tokens are tolerated and reported in `warnings`.
VectorTable load_vectors(const std::string& path, VectorKind kind, VectorLoadWarnings* warnings = nullptr);

struct TextEmbedding {
  std::vector<double> vec;
  std::size_t oov = 0;
};

struct EmojiEmbedding {
  std::vector<double> vec;
  std::size_t unmatched = 0;
};

/// Aggregate of the in-vocabulary lowercased words of the stripped text;
/// the zero vector when none are known.
TextEmbedding embed_text(const NormalizedComment& nc, const VectorTable& words,
                         Aggregation aggregation = Aggregation::Mean);

/// Aggregate over emoji tokens found in the table, one weight per occurrence.
EmojiEmbedding embed_emojis(std::span<const EmojiToken> tokens, const VectorTable& emojis,
                            Aggregation aggregation = Aggregation::Mean);

/// (text, emoji) concatenation. Throws ValidationError if either part does
/// not have its declared dimension.
std::vector<double> fuse(std::span<const double> text_vec, std::span<const double> emoji_vec, std::size_t text_dim,
                         std::size_t emoji_dim);

struct CommentEmbedding {
  std::vector<double> text_vec;
  std::vector<double> emoji_vec;
  std::vector<double> fused;
  std::size_t oov_words = 0;
  std::size_t unmatched_emojis = 0;
};

CommentEmbedding embed_comment(const NormalizedComment& nc, const VectorTable& words, const VectorTable& emojis,
                               Aggregation aggregation = Aggregation::Mean);

}  // namespace crmoji
