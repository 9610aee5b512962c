#pragma once

#include <cstddef>
#include <iosfwd>
#include <regex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crmoji/corpus.hpp"
#include "crmoji/emoji_codec.hpp"

namespace crmoji {

struct AugmentationRule {
  int priority = 0;  // lower fires first
  std::size_t ordinal = 0;  // position in the source file, 1-based
  std::string id;  // "r<ordinal>"
  std::string pattern;
  std::string intent;
  std::string glyph;
  std::regex regex;  // ECMAScript, case-insensitive
};

/// Rules sorted by (priority, ordinal). Immutable after construction.
class Rulebook {
 public:
  Rulebook() = default;
  explicit Rulebook(std::vector<AugmentationRule> rules);

  /// Compiles `pattern`; throws ValidationError if it does not compile or
  /// `glyph` is empty.
  static AugmentationRule make_rule(int priority, std::size_t ordinal, std::string pattern, std::string intent,
                                    std::string glyph);

  const std::vector<AugmentationRule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }

 private:
  std::vector<AugmentationRule> rules_;
};

/// `priority,pattern,intent,glyph`. With `tables`, every glyph must
/// normalize to exactly one emoji.
Rulebook load_rulebook(const std::string& path, const CodecTables* tables = nullptr);

struct Suggestion {
  std::string glyph;
  std::string intent;
  std::string rule_id;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

/// First `top_n` distinct glyphs of the rules whose pattern occurs in
/// nc.normalized.
std::vector<Suggestion> suggest_emojis(const NormalizedComment& nc, const Rulebook& rulebook, std::size_t top_n = 1);

/// Comments without emojis get " <glyph>" appended per suggestion and the
/// rule id(s) as provenance; comments with emojis keep their text and get
/// `original` unless they already carry a provenance; the rest get `none`.
Dataset augment_dataset(const Dataset& dataset, const Rulebook& rulebook, const CodecTables& tables,
                        std::size_t top_n = 1, std::string name = {});

// ---------------------------------------------------------------------------
// Agreement

struct AnnotationRecord {
  std::string comment_id;
  std::string annotator_id;
  std::string glyph;  // empty = NONE
};

/// `comment_id,annotator_id,glyph`. Throws LoadError on a repeated
/// (comment_id, annotator_id) pair.
std::vector<AnnotationRecord> load_annotations(const std::string& path);

/// Splits records into the two annotators in order of first appearance.
/// Throws ValidationError unless exactly two annotators are present.
std::pair<std::vector<AnnotationRecord>, std::vector<AnnotationRecord>> split_annotators(
    std::span<const AnnotationRecord> records);

struct Disagreement {
  std::string comment_id;
  std::string glyph_a;
  std::string glyph_b;
};

struct AgreementReport {
  double kappa = 0.0;
  double observed_agreement = 0.0;
  double expected_agreement = 0.0;
  std::size_t items = 0;
  std::vector<Disagreement> disagreements;  // in the order of `a`
};

/// NONE counts as a category; glyphs compare presentation-insensitively.
/// Throws ValidationError on differing id sets, repeated ids or fewer than 2
/// items, UndefinedError when expected agreement is 1.
AgreementReport cohen_kappa(std::span<const AnnotationRecord> a, std::span<const AnnotationRecord> b);

/// Summary header and line, then `comment_id,glyph_a,glyph_b` rows.
void write_agreement_csv(std::ostream& out, const AgreementReport& report);

// ---------------------------------------------------------------------------
// Frequency statistics

struct GlyphCount {
  std::string glyph;
  std::size_t count = 0;

  friend bool operator==(const GlyphCount&, const GlyphCount&) = default;
};

struct EmojiStats {
  std::string dataset;
  std::size_t size = 0;
  std::size_t emoji_comment_count = 0;
  std::vector<GlyphCount> glyphs;  // count descending, then first appearance
};

/// Occurrences, not comments. With `useful_only`, only Useful comments
/// contribute to the glyph counts; size stays the full dataset size.
EmojiStats dataset_emoji_stats(const Dataset& dataset, const CodecTables& tables, bool useful_only = false);

/// "1,481"
std::string with_thousands(std::size_t n);

/// "👍(18), 😊(9)"
std::string render_glyph_counts(std::span<const GlyphCount> glyphs);

/// Tab-separated `Dataset`, `Size`, `Emojis in the Dataset` table.
void write_stats_table(std::ostream& out, std::span<const EmojiStats> stats);

}  // namespace crmoji
