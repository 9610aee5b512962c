#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace crmoji {

/// How an emoji was written in the source text.
enum class EmojiForm { UnicodeGlyph, Shortcode, Emoticon, CodepointNotation };

std::string_view to_string(EmojiForm form) noexcept;

/// Half-open byte range.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct EmojiToken {
  std::string glyph;  // one emoji cluster
  EmojiForm source_form = EmojiForm::UnicodeGlyph;
  Span span;  // in the original text
  std::string source_text;
  Span normalized_span;  // where `glyph` sits in NormalizedComment::normalized
};

struct NormalizedComment {
  std::string original;
  std::string normalized;
  std::vector<EmojiToken> tokens;  // document order
  std::string stripped;
};

/// Sorted, merged codepoint ranges that start an emoji cluster.
class EmojiRanges {
 public:
  EmojiRanges() = default;
  explicit EmojiRanges(std::vector<std::pair<char32_t, char32_t>> ranges);

  /// Parses `start_hex,end_hex` CSV.
  static EmojiRanges load(const std::string& path);
  static EmojiRanges parse(std::string_view content, const std::string& origin);
  /// The bundled Unicode emoji ranges, compiled into the library.
  static const EmojiRanges& bundled();

  bool contains(char32_t cp) const noexcept;
  const std::vector<std::pair<char32_t, char32_t>>& ranges() const noexcept { return ranges_; }

 private:
  std::vector<std::pair<char32_t, char32_t>> ranges_;
};

/// Byte length of the emoji cluster starting at `pos`, or 0 if none starts
/// there. A cluster is a keycap sequence, a regional-indicator pair, or an
/// emoji base followed by any run of presentation selectors, skin-tone
/// modifiers, tag characters and ZWJ-joined emoji.
std::size_t emoji_cluster_length(std::string_view text, std::size_t pos, const EmojiRanges& ranges) noexcept;

/// All emoji clusters in `text`, left to right.
std::vector<Span> segment_emoji_clusters(std::string_view text, const EmojiRanges& ranges);

/// Emoticon -> shortcode -> glyph mapping plus the glyph ranges. Immutable
/// after construction; share one instance across threads.
class CodecTables {
 public:
  CodecTables();  // empty maps, bundled ranges

  /// Builds and validates tables: every shortcode glyph must be a single
  /// emoji cluster and every emoticon target must resolve. Throws
  /// ValidationError naming the offending entry.
  CodecTables(std::vector<std::pair<std::string, std::string>> emoticons,
              std::vector<std::pair<std::string, std::string>> shortcodes, EmojiRanges ranges = EmojiRanges::bundled());

  /// glyph for `:name:` (name given without colons)
  const std::string* shortcode_glyph(std::string_view name) const;
  /// target shortcode of an emoticon
  const std::string* emoticon_shortcode(std::string_view emoticon) const;
  /// emoticon resolved all the way to its glyph
  const std::string* emoticon_glyph(std::string_view emoticon) const;

  const EmojiRanges& ranges() const noexcept { return ranges_; }
  std::size_t emoticon_count() const noexcept { return emoticons_.size(); }
  std::size_t shortcode_count() const noexcept { return shortcodes_.size(); }
  std::size_t max_emoticon_length() const noexcept { return max_emoticon_length_; }

  /// True for ASCII characters that occur in some emoticon.
  bool is_emoticon_char(char c) const noexcept;

 private:
  std::unordered_map<std::string, std::string> emoticons_;
  std::unordered_map<std::string, std::string> shortcodes_;
  EmojiRanges ranges_;
  std::size_t max_emoticon_length_ = 0;
  bool emoticon_chars_[128] = {};
};

/// Reads the emoticon and shortcode CSVs; `ranges_path` empty means the
/// bundled ranges. Malformed rows throw LoadError with the line number.
CodecTables load_codec_tables(const std::string& emoticon_path, const std::string& shortcode_path,
                              const std::string& ranges_path = {});

/// Recognizes codepoint notation, shortcodes, emoticons and raw glyphs (in
/// that precedence at any one position) and rewrites them to glyphs.
/// Total over any input; invalid UTF-8 bytes are carried through verbatim.
NormalizedComment normalize_comment(std::string_view text, const CodecTables& tables);

/// `glyph` with U+FE0E/U+FE0F removed, for lookups that should treat text
/// and emoji presentation alike.
std::string presentation_insensitive_key(std::string_view glyph);

inline const std::vector<EmojiToken>& extract_emojis(const NormalizedComment& nc) { return nc.tokens; }
inline const std::string& strip_emojis(const NormalizedComment& nc) { return nc.stripped; }

}  // namespace crmoji
