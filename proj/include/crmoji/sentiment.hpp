#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "crmoji/emoji_codec.hpp"

namespace crmoji {

/// Sum or mean over the items of one comment.
enum class Aggregation { Sum, Mean };

// ---------------------------------------------------------------------------
// Emoji sentiment tables

enum class EmojiTableKind { General, CodeReview };

struct EmojiSentimentEntry {
  double score = 0.0;  // in [-1, 1]
  // General tables only: the polarity distribution behind `score`.
  long occurrences = 0;
  long negative = 0;
  long neutral = 0;
  long positive = 0;
};

/// Glyph -> sentiment. Keys ignore emoji/text presentation selectors, so ❤
/// and ❤️ share an entry.
class EmojiSentimentTable {
 public:
  explicit EmojiSentimentTable(EmojiTableKind kind = EmojiTableKind::General) : kind_(kind) {}

  EmojiTableKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws ValidationError on a duplicate glyph or an out-of-range score.
  void add(std::string_view glyph, EmojiSentimentEntry entry);
  const EmojiSentimentEntry* find(std::string_view glyph) const;

 private:
  EmojiTableKind kind_;
  std::unordered_map<std::string, EmojiSentimentEntry> entries_;
};

/// score = (positive - negative) / occurrences, rejecting occurrences == 0
/// and count mismatches.
EmojiSentimentEntry general_entry(long occurrences, long negative, long neutral, long positive);

/// `glyph,occurrences,negative,neutral,positive[,score]`
EmojiSentimentTable load_general_emoji_table(const std::string& path);
/// `glyph,score`
EmojiSentimentTable load_cr_emoji_table(const std::string& path);

// ---------------------------------------------------------------------------
// Lexicon scoring

struct ValenceLexicon {
  std::unordered_map<std::string, double> entries;
  std::unordered_set<std::string> negators;
  std::unordered_map<std::string, double> intensifiers;
  std::unordered_map<std::string, double> domain_overrides;  // consulted first

  std::optional<double> valence(const std::string& term) const;
};

/// valence CSV `term,valence`; negators `term`; intensifiers
/// `term,multiplier`; overrides `term,valence` (empty path: none).
ValenceLexicon load_lexicon(const std::string& valence_path, const std::string& negators_path,
                            const std::string& intensifiers_path, const std::string& overrides_path = {});

struct ScoringConfig {
  std::size_t negation_window = 3;
  double negation_scalar = -0.74;
  double alpha = 15.0;
  double emoji_valence_scale = 4.0;  // maps an emoji score in [-1,1] onto the ±4 valence band
  Aggregation emoji_aggregation = Aggregation::Sum;
};

/// Rule-based polarity of plain text in [-1, 1]; 0 when nothing matches.
double score_text(std::string_view text, const ValenceLexicon& lexicon, const ScoringConfig& config = {});

struct EmojiAggregate {
  double score = 0.0;
  std::size_t unmatched = 0;
};

EmojiAggregate aggregate_emoji_sentiment(std::span<const EmojiToken> tokens, const EmojiSentimentTable& table,
                                         Aggregation aggregation = Aggregation::Sum);

/// score_text over the normalized comment with each emoji glyph acting as a
/// lexicon hit worth emoji_valence_scale × its general-table score.
double score_combined(const NormalizedComment& nc, const ValenceLexicon& lexicon,
                      const EmojiSentimentTable& general_emoji, const ScoringConfig& config = {});

// ---------------------------------------------------------------------------
// Channels

struct SentimentResources {
  ValenceLexicon general;
  ValenceLexicon code_review;  // general entries plus domain overrides
  EmojiSentimentTable general_emoji{EmojiTableKind::General};
  EmojiSentimentTable cr_emoji{EmojiTableKind::CodeReview};
  ScoringConfig config;
};

struct SentimentChannels {
  double g_t = 0.0;
  double cr_t = 0.0;
  double g_e = 0.0;  // unclipped
  double cr_e = 0.0;  // unclipped
  double g_te = 0.0;
  std::size_t unmatched_emoji_count = 0;
};

SentimentChannels compute_channels(const NormalizedComment& nc, const SentimentResources& resources);

// ---------------------------------------------------------------------------
// Correlation

/// Sample Pearson coefficient. Throws ValidationError on length mismatch or
/// fewer than 2 points, UndefinedError on zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

enum class Channel { GT, CRT, GE, CRE, GTE, GTPlusGE, CRTPlusCRE };
inline constexpr Channel kAllChannels[] = {Channel::GT,  Channel::CRT,      Channel::GE,        Channel::CRE,
                                           Channel::GTE, Channel::GTPlusGE, Channel::CRTPlusCRE};

std::string_view channel_name(Channel c) noexcept;
double channel_value(const SentimentChannels& s, Channel c) noexcept;

struct CorrelationRow {
  SentimentChannels channels;
  bool has_emoji = false;
  std::optional<int> sentiment;  // -1, 0, 1
  int useful = 0;
};

struct CorrelationCell {
  std::string channel;
  std::string target;  // sentiment | usefulness
  std::string subset;  // all | emoji_only
  std::optional<double> rho;  // nullopt: undefined
  std::size_t n = 0;
};

struct CorrelationMatrix {
  std::vector<CorrelationCell> cells;

  const CorrelationCell* find(std::string_view channel, std::string_view target, std::string_view subset) const;
  /// `channel,target,subset,rho,n`; rho empty when undefined.
  void write_csv(std::ostream& out) const;
};

/// One cell per channel × target × subset. Rows without a sentiment label
/// are left out of the sentiment cells; `include_sentiment` false drops
/// those cells altogether.
CorrelationMatrix correlation_report(std::span<const CorrelationRow> rows, bool include_sentiment = true);

}  // namespace crmoji
