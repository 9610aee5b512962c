#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crmoji/augmentation.hpp"
#include "crmoji/classifier.hpp"
#include "crmoji/corpus.hpp"
#include "crmoji/embeddings.hpp"
#include "crmoji/emoji_codec.hpp"
#include "crmoji/features.hpp"
#include "crmoji/sentiment.hpp"

namespace crmoji {

/// Directory holding the bundled resource tables: $CRMOJI_DATA_DIR if set,
/// else the source tree's data/ directory.
std::string default_data_dir();

struct ResourcePaths {
  std::string emoticons;
  std::string shortcodes;
  std::string emoji_ranges;  // empty: compiled-in ranges
  std::string lexicon;
  std::string negators;
  std::string intensifiers;
  std::string cr_overrides;
  std::string general_emoji;
  std::string cr_emoji;
  std::string stoplist;
  std::string rulebook;
  std::string word_vectors;   // embedding mode only
  std::string emoji_vectors;  // embedding mode only

  static ResourcePaths in_dir(const std::string& dir);
};

struct RunConfig {
  ResourcePaths paths = ResourcePaths::in_dir(default_data_dir());
  std::uint64_t seed = 42;
  std::size_t folds = 10;
  ForestParams forest;  // forest.seed is overwritten by `seed`
  std::string out_dir = ".";
  unsigned threads = 0;
  Aggregation emoji_sentiment_aggregation = Aggregation::Sum;
  Aggregation embedding_aggregation = Aggregation::Mean;
  bool emoji_only = false;
  bool useful_only = false;
  std::size_t top_n = 1;

  ForestParams forest_params() const;
};

enum class H2Mode { Features, Embeddings };

std::string_view to_string(H2Mode mode) noexcept;
H2Mode parse_h2_mode(std::string_view s);

struct Resources {
  CodecTables codec;
  SentimentResources sentiment;
  Stoplist stoplist;
  std::optional<VectorTable> words;
  std::optional<VectorTable> emojis;

  FeatureResources feature_view(Aggregation embedding_aggregation) const;
};

/// Throws LoadError naming the first missing or malformed file.
Resources load_resources(const RunConfig& config, bool with_embeddings);

using Log = std::ostream;

// ---------------------------------------------------------------------------
// H1

struct H1Result {
  CorrelationMatrix pooled;
  std::vector<std::pair<std::string, CorrelationMatrix>> per_dataset;
};

H1Result run_h1(const RunConfig& config, const Resources& resources, const std::vector<Dataset>& datasets, Log& log);

/// Writes correlations.csv (all datasets pooled) and
/// correlations.<dataset>.csv under config.out_dir.
H1Result cmd_h1(const RunConfig& config, const std::vector<std::string>& dataset_paths, Log& log);

// ---------------------------------------------------------------------------
// H2

struct H2Result {
  std::vector<MetricsRow> metrics;
  std::vector<DeltaReport> deltas;
};

/// For every dataset (plus D_all when there are two or more, or only D_all
/// with config.emoji_only) and every mode, evaluates the baseline and the
/// emoji-augmented design with the same folds.
H2Result run_h2(const RunConfig& config, const Resources& resources, const std::vector<Dataset>& datasets,
                const std::vector<H2Mode>& modes, Log& log);

/// Writes metrics.csv and deltas.csv under config.out_dir.
H2Result cmd_h2(const RunConfig& config, const std::vector<std::string>& dataset_paths,
                const std::vector<H2Mode>& modes, Log& log);

// ---------------------------------------------------------------------------
// Utilities

/// One output line per input line: the normalized text, or with `as_json`
/// an object with the tokens.
void cmd_normalize(const RunConfig& config, std::istream& in, std::ostream& out, bool as_json);

/// `g_t,cr_t,g_e,cr_e,g_te,unmatched` per input line.
void cmd_score(const RunConfig& config, std::istream& in, std::ostream& out);

/// Writes stats.txt under config.out_dir and returns its contents.
std::string cmd_stats(const RunConfig& config, const std::vector<std::string>& dataset_paths);

/// Writes the augmented dataset and its manifest; returns the dataset.
Dataset cmd_augment(const RunConfig& config, const std::string& dataset_path, const std::string& output_path);

/// One file with two annotators or two files with one each. Writes
/// agreement.csv under config.out_dir.
AgreementReport cmd_kappa(const RunConfig& config, const std::vector<std::string>& annotation_paths);

}  // namespace crmoji
