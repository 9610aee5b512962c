#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "crmoji/corpus.hpp"
#include "crmoji/embeddings.hpp"
#include "crmoji/emoji_codec.hpp"
#include "crmoji/sentiment.hpp"

namespace crmoji {

inline constexpr std::string_view kTextSchema = "text-v1";
inline constexpr std::string_view kEmojiSchema = "emoji-v1";
inline constexpr std::string_view kTextEmojiSchema = "text-v1+emoji-v1";

const std::vector<std::string>& text_feature_names();
const std::vector<std::string>& emoji_feature_names();

struct FeatureVector {
  std::string schema_id;
  std::vector<std::string> names;
  std::vector<double> values;

  /// Throws std::out_of_range for an unknown name.
  double at(std::string_view name) const;
};

using Stoplist = std::unordered_set<std::string>;

/// One lowercased term per line; blank lines and `#` comments skipped.
Stoplist load_stoplist(const std::string& path);

/// word_count, char_count, stop_word_ratio, question_ratio,
/// code_element_ratio, flesch_reading_ease (0 when there are no words or
/// sentences) and text_sentiment (the CR_T channel), all on the stripped text.
FeatureVector extract_text_features(const NormalizedComment& nc, const Stoplist& stoplist,
                                    const SentimentChannels& channels);

/// emoji_count, g_e_sum, cr_e_sum, unmatched_count.
FeatureVector extract_emoji_features(const NormalizedComment& nc, const SentimentChannels& channels);

enum class DesignMode { TextFeatures, TextPlusEmojiFeatures, TextEmbedding, FusedEmbedding };

std::string_view to_string(DesignMode mode) noexcept;

struct FeatureResources {
  const CodecTables* codec = nullptr;
  const Stoplist* stoplist = nullptr;
  const SentimentResources* sentiment = nullptr;
  const VectorTable* words = nullptr;   // embedding modes only
  const VectorTable* emojis = nullptr;  // FusedEmbedding only
  Aggregation embedding_aggregation = Aggregation::Mean;
};

struct DesignMatrix {
  DesignMode mode = DesignMode::TextFeatures;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::vector<std::string> ids;

  std::size_t dim() const noexcept { return columns.size(); }
};

/// Rows in dataset order. Throws ValidationError on an empty dataset or a
/// resource the mode needs but `resources` lacks.
DesignMatrix build_design_matrix(const Dataset& dataset, DesignMode mode, const FeatureResources& resources,
                                 unsigned threads = 0);

/// Header = column names + `label`.
void write_design_matrix_csv(std::ostream& out, const DesignMatrix& matrix);

}  // namespace crmoji
