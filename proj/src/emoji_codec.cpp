#include "crmoji/emoji_codec.hpp"

#include <algorithm>
#include <cctype>

#include "crmoji/csv.hpp"
#include "crmoji/error.hpp"
#include "crmoji/utf8.hpp"

namespace crmoji {

namespace detail {
extern const std::string_view kBundledEmojiRanges;
}

namespace {

constexpr char32_t kZwj = 0x200D;

bool is_regional_indicator(char32_t cp) { return cp >= 0x1F1E6 && cp <= 0x1F1FF; }

bool is_extender(char32_t cp) {
  return cp == 0xFE0E || cp == 0xFE0F || cp == 0x20E3 || (cp >= 0x1F3FB && cp <= 0x1F3FF) ||
         (cp >= 0xE0020 && cp <= 0xE007F);
}

bool is_keycap_base(char32_t cp) { return (cp >= '0' && cp <= '9') || cp == '#' || cp == '*'; }

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_shortcode_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::size_t absorb_extenders(std::string_view text, std::size_t p) {
  while (p < text.size()) {
    const auto d = utf8::decode(text, p);
    if (!is_extender(d.cp)) break;
    p += d.length;
  }
  return p;
}

}  // namespace

std::string_view to_string(EmojiForm form) noexcept {
  switch (form) {
    case EmojiForm::UnicodeGlyph: return "UnicodeGlyph";
    case EmojiForm::Shortcode: return "Shortcode";
    case EmojiForm::Emoticon: return "Emoticon";
    case EmojiForm::CodepointNotation: return "CodepointNotation";
  }
  return "UnicodeGlyph";
}

// ---------------------------------------------------------------------------
// EmojiRanges

EmojiRanges::EmojiRanges(std::vector<std::pair<char32_t, char32_t>> ranges) : ranges_(std::move(ranges)) {
  std::sort(ranges_.begin(), ranges_.end());
  std::vector<std::pair<char32_t, char32_t>> merged;
  for (const auto& r : ranges_) {
    if (!merged.empty() && r.first <= merged.back().second + 1) {
      merged.back().second = std::max(merged.back().second, r.second);
    } else {
      merged.push_back(r);
    }
  }
  ranges_ = std::move(merged);
}

EmojiRanges EmojiRanges::parse(std::string_view content, const std::string& origin) {
  const auto table = csv::parse_plain(content, origin);
  if (table.header != std::vector<std::string>{"start_hex", "end_hex"}) {
    throw LoadError(origin, 1, "expected header start_hex,end_hex");
  }
  auto parse_hex = [&](const std::string& field, std::size_t line) {
    if (field.empty() || field.size() > 6) throw LoadError(origin, line, "bad hex codepoint '" + field + "'");
    char32_t value = 0;
    for (char c : field) {
      const int v = hex_value(c);
      if (v < 0) throw LoadError(origin, line, "bad hex codepoint '" + field + "'");
      value = value * 16 + static_cast<char32_t>(v);
    }
    if (value > 0x10FFFF) throw LoadError(origin, line, "codepoint out of range '" + field + "'");
    return value;
  };
  std::vector<std::pair<char32_t, char32_t>> ranges;
  for (const auto& row : table.rows) {
    if (row.fields.size() != 2) throw LoadError(origin, row.line, "expected 2 fields");
    const char32_t lo = parse_hex(row.fields[0], row.line);
    const char32_t hi = parse_hex(row.fields[1], row.line);
    if (hi < lo) throw LoadError(origin, row.line, "end_hex precedes start_hex");
    if (lo < 0x80) throw LoadError(origin, row.line, "ASCII codepoints cannot start an emoji");
    ranges.emplace_back(lo, hi);
  }
  return EmojiRanges(std::move(ranges));
}

EmojiRanges EmojiRanges::load(const std::string& path) { return parse(csv::read_file(path), path); }

const EmojiRanges& EmojiRanges::bundled() {
  static const EmojiRanges instance = parse(detail::kBundledEmojiRanges, "<bundled emoji_ranges.csv>");
  return instance;
}

bool EmojiRanges::contains(char32_t cp) const noexcept {
  auto it = std::upper_bound(ranges_.begin(), ranges_.end(), cp,
                             [](char32_t value, const auto& range) { return value < range.first; });
  if (it == ranges_.begin()) return false;
  --it;
  return cp <= it->second;
}

// ---------------------------------------------------------------------------
// Cluster segmentation

std::size_t emoji_cluster_length(std::string_view text, std::size_t pos, const EmojiRanges& ranges) noexcept {
  if (pos >= text.size()) return 0;
  const auto first = utf8::decode(text, pos);
  std::size_t p = pos + first.length;

  if (is_keycap_base(first.cp)) {
    if (p < text.size() && utf8::decode(text, p).cp == 0xFE0F) p += 3;
    if (p < text.size() && utf8::decode(text, p).cp == 0x20E3) return absorb_extenders(text, p + 3) - pos;
    return 0;
  }
  if (first.length == 1 && first.cp >= 0x80) return 0;  // invalid byte
  if (!ranges.contains(first.cp)) return 0;

  if (is_regional_indicator(first.cp)) {
    if (p < text.size()) {
      const auto next = utf8::decode(text, p);
      if (is_regional_indicator(next.cp)) p += next.length;
    }
    return absorb_extenders(text, p) - pos;
  }

  while (true) {
    p = absorb_extenders(text, p);
    if (p >= text.size()) break;
    const auto joiner = utf8::decode(text, p);
    if (joiner.cp != kZwj) break;
    p += joiner.length;
    if (p >= text.size()) break;
    const auto next = utf8::decode(text, p);
    if (next.length == 1 && next.cp >= 0x80) break;
    if (!ranges.contains(next.cp) || is_regional_indicator(next.cp)) break;
    p += next.length;
  }
  return p - pos;
}

std::vector<Span> segment_emoji_clusters(std::string_view text, const EmojiRanges& ranges) {
  std::vector<Span> clusters;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t len = emoji_cluster_length(text, pos, ranges);
    if (len > 0) {
      clusters.push_back({pos, pos + len});
      pos += len;
    } else {
      pos += utf8::decode(text, pos).length;
    }
  }
  return clusters;
}

// ---------------------------------------------------------------------------
// CodecTables

CodecTables::CodecTables() : ranges_(EmojiRanges::bundled()) {}

CodecTables::CodecTables(std::vector<std::pair<std::string, std::string>> emoticons,
                         std::vector<std::pair<std::string, std::string>> shortcodes, EmojiRanges ranges)
    : ranges_(std::move(ranges)) {
  for (auto& [name, glyph] : shortcodes) {
    if (name.empty() || !std::all_of(name.begin(), name.end(), is_shortcode_char)) {
      throw ValidationError("shortcode '" + name + "' has characters outside [A-Za-z0-9_+-]");
    }
    if (glyph.empty() || emoji_cluster_length(glyph, 0, ranges_) != glyph.size()) {
      throw ValidationError("shortcode '" + name + "' does not map to a single emoji");
    }
    if (!shortcodes_.emplace(name, glyph).second) throw ValidationError("duplicate shortcode '" + name + "'");
  }
  for (auto& [emoticon, target] : emoticons) {
    if (emoticon.empty()) throw ValidationError("empty emoticon");
    for (char c : emoticon) {
      const auto u = static_cast<unsigned char>(c);
      if (u < 0x21 || u > 0x7E) throw ValidationError("emoticon '" + emoticon + "' must be printable ASCII");
    }
    if (!shortcodes_.contains(target)) {
      throw ValidationError("emoticon '" + emoticon + "' targets unknown shortcode '" + target + "'");
    }
    if (!emoticons_.emplace(emoticon, target).second) throw ValidationError("duplicate emoticon '" + emoticon + "'");
    max_emoticon_length_ = std::max(max_emoticon_length_, emoticon.size());
    for (char c : emoticon) emoticon_chars_[static_cast<unsigned char>(c)] = true;
  }
}

const std::string* CodecTables::shortcode_glyph(std::string_view name) const {
  auto it = shortcodes_.find(std::string(name));
  return it == shortcodes_.end() ? nullptr : &it->second;
}

const std::string* CodecTables::emoticon_shortcode(std::string_view emoticon) const {
  auto it = emoticons_.find(std::string(emoticon));
  return it == emoticons_.end() ? nullptr : &it->second;
}

const std::string* CodecTables::emoticon_glyph(std::string_view emoticon) const {
  const auto* code = emoticon_shortcode(emoticon);
  return code ? shortcode_glyph(*code) : nullptr;
}

bool CodecTables::is_emoticon_char(char c) const noexcept {
  const auto u = static_cast<unsigned char>(c);
  return u < 128 && emoticon_chars_[u];
}

CodecTables load_codec_tables(const std::string& emoticon_path, const std::string& shortcode_path,
                              const std::string& ranges_path) {
  auto read_pairs = [](const std::string& path, const std::vector<std::string>& header) {
    const auto table = csv::read_plain(path);
    if (table.header.empty() && table.rows.empty()) return std::vector<std::pair<std::string, std::string>>{};
    if (table.header != header) throw LoadError(path, 1, "expected header " + header[0] + "," + header[1]);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& row : table.rows) {
      if (row.fields.size() != 2) throw LoadError(path, row.line, "expected 2 fields");
      if (row.fields[0].empty() || row.fields[1].empty()) throw LoadError(path, row.line, "empty field");
      pairs.emplace_back(row.fields[0], row.fields[1]);
    }
    return pairs;
  };
  auto emoticons = read_pairs(emoticon_path, {"emoticon", "shortcode"});
  auto shortcodes = read_pairs(shortcode_path, {"shortcode", "glyph"});
  auto ranges = ranges_path.empty() ? EmojiRanges::bundled() : EmojiRanges::load(ranges_path);
  return CodecTables(std::move(emoticons), std::move(shortcodes), std::move(ranges));
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

struct Piece {
  Span normalized;
  Span original;
  std::optional<EmojiForm> form;  // nullopt: copied verbatim
};

struct Match {
  std::size_t length;
  const std::string* glyph;
  std::string owned;  // codepoint notation builds its glyph
  EmojiForm form;
};

class Normalizer {
 public:
  Normalizer(std::string_view text, const CodecTables& tables) : text_(text), tables_(tables) {}

  NormalizedComment run() {
    rewrite();
    NormalizedComment nc;
    nc.original = std::string(text_);
    nc.normalized = out_;
    collect_tokens(nc);
    nc.stripped = strip(nc);
    return nc;
  }

 private:
  std::optional<Match> match_codepoint(std::size_t pos) const {
    std::size_t p = pos;
    if (p + 1 < text_.size() && (text_[p] == 'U' || text_[p] == 'u') && text_[p + 1] == '+') {
      p += 2;
    } else if (p + 1 < text_.size() && text_[p] == '+' && (text_[p + 1] == 'U' || text_[p + 1] == 'u')) {
      p += 2;
    } else {
      return std::nullopt;
    }
    std::size_t digits = 0;
    while (digits < 6 && p + digits < text_.size() && hex_value(text_[p + digits]) >= 0) ++digits;
    for (std::size_t len = digits; len >= 4; --len) {
      char32_t cp = 0;
      for (std::size_t i = 0; i < len; ++i) cp = cp * 16 + static_cast<char32_t>(hex_value(text_[p + i]));
      if (cp <= 0x10FFFF && tables_.ranges().contains(cp)) {
        return Match{p + len - pos, nullptr, utf8::encode(cp), EmojiForm::CodepointNotation};
      }
    }
    return std::nullopt;
  }

  std::optional<Match> match_shortcode(std::size_t pos) const {
    if (text_[pos] != ':') return std::nullopt;
    std::size_t p = pos + 1;
    while (p < text_.size() && is_shortcode_char(text_[p])) ++p;
    if (p == pos + 1 || p >= text_.size() || text_[p] != ':') return std::nullopt;
    const auto* glyph = tables_.shortcode_glyph(text_.substr(pos + 1, p - pos - 1));
    if (!glyph) return std::nullopt;
    return Match{p + 1 - pos, glyph, {}, EmojiForm::Shortcode};
  }

  bool is_boundary_char(char c) const {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x80) return false;
    if (is_ascii_space(c)) return true;
    return std::ispunct(u) && !tables_.is_emoticon_char(c);
  }

  std::optional<Match> match_emoticon(std::size_t pos) const {
    if (tables_.emoticon_count() == 0) return std::nullopt;
    if (pos > 0 && !is_boundary_char(text_[pos - 1])) return std::nullopt;
    const std::size_t longest = std::min(tables_.max_emoticon_length(), text_.size() - pos);
    for (std::size_t len = longest; len >= 1; --len) {
      const std::size_t end = pos + len;
      if (end < text_.size() && !is_boundary_char(text_[end])) continue;
      const auto* glyph = tables_.emoticon_glyph(text_.substr(pos, len));
      if (glyph) return Match{len, glyph, {}, EmojiForm::Emoticon};
    }
    return std::nullopt;
  }

  // Inserting a multi-codepoint glyph that starts with a regional indicator
  // after an odd run of indicators would re-pair the flags and put a cluster
  // boundary inside the glyph; such a form is left verbatim.
  bool splits_flag_pair(std::string_view glyph) const {
    const auto first = utf8::decode(glyph, 0);
    if (!is_regional_indicator(first.cp) || first.length == glyph.size()) return false;
    std::size_t run = 0;
    std::size_t p = out_.size();
    while (p >= 4) {
      const auto d = utf8::decode(out_, p - 4);
      if (d.length != 4 || !is_regional_indicator(d.cp)) break;
      ++run;
      p -= 4;
    }
    return run % 2 == 1;
  }

  void emit_verbatim(std::size_t pos, std::size_t len) {
    if (!pieces_.empty() && !pieces_.back().form && pieces_.back().original.end == pos) {
      pieces_.back().original.end += len;
      pieces_.back().normalized.end += len;
    } else {
      pieces_.push_back({{out_.size(), out_.size() + len}, {pos, pos + len}, std::nullopt});
    }
    out_.append(text_.substr(pos, len));
  }

  void rewrite() {
    std::size_t pos = 0;
    while (pos < text_.size()) {
      std::optional<Match> m = match_codepoint(pos);
      if (!m) m = match_shortcode(pos);
      if (!m) m = match_emoticon(pos);
      if (m) {
        const std::string& glyph = m->glyph ? *m->glyph : m->owned;
        if (!splits_flag_pair(glyph)) {
          pieces_.push_back({{out_.size(), out_.size() + glyph.size()}, {pos, pos + m->length}, m->form});
          out_ += glyph;
          pos += m->length;
          continue;
        }
      }
      const std::size_t len = utf8::decode(text_, pos).length;
      emit_verbatim(pos, len);
      pos += len;
    }
  }

  const Piece& piece_at(std::size_t normalized_offset) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), normalized_offset,
                               [](std::size_t off, const Piece& p) { return off < p.normalized.start; });
    return *(it - 1);
  }

  std::size_t original_start(std::size_t a) const {
    const Piece& p = piece_at(a);
    return p.form ? p.original.start : p.original.start + (a - p.normalized.start);
  }

  std::size_t original_end(std::size_t b) const {
    const Piece& p = piece_at(b - 1);
    return p.form ? p.original.end : p.original.start + (b - p.normalized.start);
  }

  void collect_tokens(NormalizedComment& nc) const {
    for (const Span& cluster : segment_emoji_clusters(out_, tables_.ranges())) {
      EmojiToken token;
      token.glyph = out_.substr(cluster.start, cluster.size());
      const Piece& head = piece_at(cluster.start);
      token.source_form = head.form.value_or(EmojiForm::UnicodeGlyph);
      token.span = {original_start(cluster.start), original_end(cluster.end)};
      token.source_text = std::string(text_.substr(token.span.start, token.span.size()));
      token.normalized_span = cluster;
      nc.tokens.push_back(std::move(token));
    }
  }

  static std::string strip(const NormalizedComment& nc) {
    std::string spaced;
    std::size_t pos = 0;
    for (const auto& token : nc.tokens) {
      spaced.append(nc.normalized, pos, token.normalized_span.start - pos);
      spaced.push_back(' ');
      pos = token.normalized_span.end;
    }
    spaced.append(nc.normalized, pos);

    std::string out;
    bool pending_space = false;
    for (char c : spaced) {
      if (is_ascii_space(c)) {
        pending_space = !out.empty();
        continue;
      }
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
    return out;
  }

  std::string_view text_;
  const CodecTables& tables_;
  std::string out_;
  std::vector<Piece> pieces_;
};

}  // namespace

std::string presentation_insensitive_key(std::string_view glyph) {
  std::string key;
  key.reserve(glyph.size());
  std::size_t pos = 0;
  while (pos < glyph.size()) {
    const auto d = utf8::decode(glyph, pos);
    if (d.cp != 0xFE0E && d.cp != 0xFE0F) key.append(glyph.substr(pos, d.length));
    pos += d.length;
  }
  return key;
}

NormalizedComment normalize_comment(std::string_view text, const CodecTables& tables) {
  return Normalizer(text, tables).run();
}

}  // namespace crmoji
