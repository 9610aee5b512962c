#include "crmoji/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "crmoji/csv.hpp"
#include "crmoji/error.hpp"
#include "crmoji/text.hpp"

namespace crmoji {

namespace {

std::string table_key(std::string_view glyph) { return presentation_insensitive_key(glyph); }

double parse_real(const std::string& field, const std::string& path, std::size_t line) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw LoadError(path, line, "bad number '" + field + "'");
  }
  return value;
}

long parse_count(const std::string& field, const std::string& path, std::size_t line) {
  long value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 0) {
    throw LoadError(path, line, "bad count '" + field + "'");
  }
  return value;
}

void require_header(const csv::Table& table, const std::vector<std::string>& header, const std::string& path) {
  if (table.header != header) {
    std::string expected;
    for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
    throw LoadError(path, 1, "expected header " + expected);
  }
}

double squash(double sum, double alpha) {
  return std::clamp(sum / std::sqrt(sum * sum + alpha), -1.0, 1.0);
}

// One position in the scored sequence: a word, or an emoji with its valence.
struct Item {
  std::string word;
  std::optional<double> emoji_valence;
  bool is_emoji = false;
};

double score_items(const std::vector<Item>& items, const ValenceLexicon& lexicon, const ScoringConfig& config) {
  double sum = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::optional<double> v = items[i].is_emoji ? items[i].emoji_valence : lexicon.valence(items[i].word);
    if (!v) continue;
    double value = *v;
    const std::size_t from = i >= config.negation_window ? i - config.negation_window : 0;
    for (std::size_t j = from; j < i; ++j) {
      if (!items[j].is_emoji && lexicon.negators.contains(items[j].word)) {
        value *= config.negation_scalar;
        break;
      }
    }
    if (i > 0 && !items[i - 1].is_emoji) {
      if (auto it = lexicon.intensifiers.find(items[i - 1].word); it != lexicon.intensifiers.end()) {
        value *= it->second;
      }
    }
    sum += value;
    any = true;
  }
  return any ? squash(sum, config.alpha) : 0.0;
}

void append_words(std::vector<Item>& items, std::string_view text) {
  for (auto& w : text::word_tokens(text)) items.push_back({std::move(w), std::nullopt, false});
}

}  // namespace

// ---------------------------------------------------------------------------
// Emoji sentiment tables

void EmojiSentimentTable::add(std::string_view glyph, EmojiSentimentEntry entry) {
  if (glyph.empty()) throw ValidationError("empty glyph in emoji sentiment table");
  if (!std::isfinite(entry.score) || entry.score < -1.0 || entry.score > 1.0) {
    throw ValidationError("emoji score out of [-1, 1] for " + std::string(glyph));
  }
  if (!entries_.emplace(table_key(glyph), entry).second) {
    throw ValidationError("duplicate glyph " + std::string(glyph) + " in emoji sentiment table");
  }
}

const EmojiSentimentEntry* EmojiSentimentTable::find(std::string_view glyph) const {
  auto it = entries_.find(table_key(glyph));
  return it == entries_.end() ? nullptr : &it->second;
}

EmojiSentimentEntry general_entry(long occurrences, long negative, long neutral, long positive) {
  if (occurrences <= 0) throw ValidationError("occurrences must be positive");
  if (negative < 0 || neutral < 0 || positive < 0) throw ValidationError("negative count");
  if (negative + neutral + positive != occurrences) {
    throw ValidationError("negative + neutral + positive != occurrences");
  }
  EmojiSentimentEntry e;
  e.occurrences = occurrences;
  e.negative = negative;
  e.neutral = neutral;
  e.positive = positive;
  e.score = static_cast<double>(positive - negative) / static_cast<double>(occurrences);
  return e;
}

EmojiSentimentTable load_general_emoji_table(const std::string& path) {
  const auto table = csv::read_plain(path);
  const std::vector<std::string> base{"glyph", "occurrences", "negative", "neutral", "positive"};
  auto with_score = base;
  with_score.push_back("score");
  const bool has_score = table.header == with_score;
  if (!has_score) require_header(table, base, path);

  EmojiSentimentTable result(EmojiTableKind::General);
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) throw LoadError(path, row.line, "wrong field count");
    const long occ = parse_count(row.fields[1], path, row.line);
    const long neg = parse_count(row.fields[2], path, row.line);
    const long neu = parse_count(row.fields[3], path, row.line);
    const long pos = parse_count(row.fields[4], path, row.line);
    EmojiSentimentEntry entry;
    try {
      entry = general_entry(occ, neg, neu, pos);
      if (has_score) {
        const double stated = parse_real(row.fields[5], path, row.line);
        if (std::abs(stated - entry.score) > 1e-9) throw ValidationError("score column disagrees with counts");
      }
      result.add(row.fields[0], entry);
    } catch (const ValidationError& e) {
      throw LoadError(path, row.line, e.what());
    }
  }
  return result;
}

EmojiSentimentTable load_cr_emoji_table(const std::string& path) {
  const auto table = csv::read_plain(path);
  require_header(table, {"glyph", "score"}, path);
  EmojiSentimentTable result(EmojiTableKind::CodeReview);
  for (const auto& row : table.rows) {
    if (row.fields.size() != 2) throw LoadError(path, row.line, "wrong field count");
    EmojiSentimentEntry entry;
    entry.score = parse_real(row.fields[1], path, row.line);
    try {
      result.add(row.fields[0], entry);
    } catch (const ValidationError& e) {
      throw LoadError(path, row.line, e.what());
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Lexicon

std::optional<double> ValenceLexicon::valence(const std::string& term) const {
  if (auto it = domain_overrides.find(term); it != domain_overrides.end()) return it->second;
  if (auto it = entries.find(term); it != entries.end()) return it->second;
  return std::nullopt;
}

ValenceLexicon load_lexicon(const std::string& valence_path, const std::string& negators_path,
                            const std::string& intensifiers_path, const std::string& overrides_path) {
  ValenceLexicon lex;
  auto read_valences = [](const std::string& path, std::unordered_map<std::string, double>& into) {
    const auto table = csv::read_plain(path);
    require_header(table, {"term", "valence"}, path);
    for (const auto& row : table.rows) {
      if (row.fields.size() != 2 || row.fields[0].empty()) throw LoadError(path, row.line, "expected term,valence");
      into[text::ascii_lower(row.fields[0])] = parse_real(row.fields[1], path, row.line);
    }
  };
  read_valences(valence_path, lex.entries);
  if (!overrides_path.empty()) read_valences(overrides_path, lex.domain_overrides);

  {
    const auto table = csv::read_plain(negators_path);
    require_header(table, {"term"}, negators_path);
    for (const auto& row : table.rows) {
      if (row.fields.size() != 1 || row.fields[0].empty()) throw LoadError(negators_path, row.line, "expected term");
      lex.negators.insert(text::ascii_lower(row.fields[0]));
    }
  }
  {
    const auto table = csv::read_plain(intensifiers_path);
    require_header(table, {"term", "multiplier"}, intensifiers_path);
    for (const auto& row : table.rows) {
      if (row.fields.size() != 2 || row.fields[0].empty()) {
        throw LoadError(intensifiers_path, row.line, "expected term,multiplier");
      }
      const double m = parse_real(row.fields[1], intensifiers_path, row.line);
      if (m <= 0.0) throw LoadError(intensifiers_path, row.line, "multiplier must be positive");
      lex.intensifiers[text::ascii_lower(row.fields[0])] = m;
    }
  }
  return lex;
}

double score_text(std::string_view text, const ValenceLexicon& lexicon, const ScoringConfig& config) {
  std::vector<Item> items;
  append_words(items, text);
  return score_items(items, lexicon, config);
}

EmojiAggregate aggregate_emoji_sentiment(std::span<const EmojiToken> tokens, const EmojiSentimentTable& table,
                                         Aggregation aggregation) {
  EmojiAggregate agg;
  std::size_t matched = 0;
  for (const auto& token : tokens) {
    if (const auto* entry = table.find(token.glyph)) {
      agg.score += entry->score;
      ++matched;
    } else {
      ++agg.unmatched;
    }
  }
  if (aggregation == Aggregation::Mean && matched > 0) agg.score /= static_cast<double>(matched);
  return agg;
}

double score_combined(const NormalizedComment& nc, const ValenceLexicon& lexicon,
                      const EmojiSentimentTable& general_emoji, const ScoringConfig& config) {
  std::vector<Item> items;
  std::size_t pos = 0;
  const std::string_view normalized = nc.normalized;
  for (const auto& token : nc.tokens) {
    append_words(items, normalized.substr(pos, token.normalized_span.start - pos));
    Item emoji;
    emoji.is_emoji = true;
    if (const auto* entry = general_emoji.find(token.glyph)) {
      emoji.emoji_valence = config.emoji_valence_scale * entry->score;
    }
    items.push_back(std::move(emoji));
    pos = token.normalized_span.end;
  }
  append_words(items, normalized.substr(pos));
  return score_items(items, lexicon, config);
}

SentimentChannels compute_channels(const NormalizedComment& nc, const SentimentResources& res) {
  SentimentChannels ch;
  ch.g_t = score_text(nc.stripped, res.general, res.config);
  ch.cr_t = score_text(nc.stripped, res.code_review, res.config);
  const auto general = aggregate_emoji_sentiment(nc.tokens, res.general_emoji, res.config.emoji_aggregation);
  ch.g_e = general.score;
  ch.unmatched_emoji_count = general.unmatched;
  ch.cr_e = aggregate_emoji_sentiment(nc.tokens, res.cr_emoji, res.config.emoji_aggregation).score;
  ch.g_te = score_combined(nc, res.general, res.general_emoji, res.config);
  return ch;
}

// ---------------------------------------------------------------------------
// Correlation

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ValidationError("pearson: series lengths differ");
  if (xs.size() < 2) throw ValidationError("pearson: need at least 2 points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) throw UndefinedError("pearson: zero variance");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string_view channel_name(Channel c) noexcept {
  switch (c) {
    case Channel::GT: return "G_T";
    case Channel::CRT: return "CR_T";
    case Channel::GE: return "G_E";
    case Channel::CRE: return "CR_E";
    case Channel::GTE: return "G_TE";
    case Channel::GTPlusGE: return "G_T+G_E";
    case Channel::CRTPlusCRE: return "CR_T+CR_E";
  }
  return "";
}

double channel_value(const SentimentChannels& s, Channel c) noexcept {
  switch (c) {
    case Channel::GT: return s.g_t;
    case Channel::CRT: return s.cr_t;
    case Channel::GE: return s.g_e;
    case Channel::CRE: return s.cr_e;
    case Channel::GTE: return s.g_te;
    case Channel::GTPlusGE: return s.g_t + s.g_e;
    case Channel::CRTPlusCRE: return s.cr_t + s.cr_e;
  }
  return 0.0;
}

const CorrelationCell* CorrelationMatrix::find(std::string_view channel, std::string_view target,
                                               std::string_view subset) const {
  for (const auto& cell : cells) {
    if (cell.channel == channel && cell.target == target && cell.subset == subset) return &cell;
  }
  return nullptr;
}

void CorrelationMatrix::write_csv(std::ostream& out) const {
  out << "channel,target,subset,rho,n\n";
  for (const auto& cell : cells) {
    out << cell.channel << ',' << cell.target << ',' << cell.subset << ',';
    if (cell.rho) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", *cell.rho);
      out << buf;
    }
    out << ',' << cell.n << '\n';
  }
}

CorrelationMatrix correlation_report(std::span<const CorrelationRow> rows, bool include_sentiment) {
  CorrelationMatrix matrix;
  struct Target {
    std::string_view name;
    bool sentiment;
  };
  std::vector<Target> targets;
  if (include_sentiment) targets.push_back({"sentiment", true});
  targets.push_back({"usefulness", false});

  for (Channel channel : kAllChannels) {
    for (const auto& target : targets) {
      for (const bool emoji_only : {false, true}) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& row : rows) {
          if (emoji_only && !row.has_emoji) continue;
          if (target.sentiment && !row.sentiment) continue;
          xs.push_back(channel_value(row.channels, channel));
          ys.push_back(target.sentiment ? static_cast<double>(*row.sentiment) : static_cast<double>(row.useful));
        }
        CorrelationCell cell;
        cell.channel = std::string(channel_name(channel));
        cell.target = std::string(target.name);
        cell.subset = emoji_only ? "emoji_only" : "all";
        cell.n = xs.size();
        if (xs.size() >= 2) {
          try {
            cell.rho = pearson(xs, ys);
          } catch (const UndefinedError&) {
          }
        }
        matrix.cells.push_back(std::move(cell));
      }
    }
  }
  return matrix;
}

}  // namespace crmoji
