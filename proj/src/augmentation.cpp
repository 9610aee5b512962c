#include "crmoji/augmentation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "crmoji/csv.hpp"
#include "crmoji/error.hpp"

namespace crmoji {

Rulebook::Rulebook(std::vector<AugmentationRule> rules) : rules_(std::move(rules)) {
  std::stable_sort(rules_.begin(), rules_.end(), [](const AugmentationRule& a, const AugmentationRule& b) {
    return a.priority != b.priority ? a.priority < b.priority : a.ordinal < b.ordinal;
  });
}

AugmentationRule Rulebook::make_rule(int priority, std::size_t ordinal, std::string pattern, std::string intent,
                                     std::string glyph) {
  if (glyph.empty()) throw ValidationError("rule " + std::to_string(ordinal) + " has no glyph");
  AugmentationRule r;
  r.priority = priority;
  r.ordinal = ordinal;
  r.id = "r" + std::to_string(ordinal);
  try {
    r.regex = std::regex(pattern, std::regex::ECMAScript | std::regex::icase);
  } catch (const std::regex_error& e) {
    throw ValidationError("rule " + r.id + " pattern does not compile: " + e.what());
  }
  r.pattern = std::move(pattern);
  r.intent = std::move(intent);
  r.glyph = std::move(glyph);
  return r;
}

Rulebook load_rulebook(const std::string& path, const CodecTables* tables) {
  const auto table = csv::read_plain(path);
  const int c_priority = csv::column(table.header, "priority");
  const int c_pattern = csv::column(table.header, "pattern");
  const int c_intent = csv::column(table.header, "intent");
  const int c_glyph = csv::column(table.header, "glyph");
  if (c_priority < 0 || c_pattern < 0 || c_intent < 0 || c_glyph < 0) {
    throw LoadError(path, 1, "header must be priority,pattern,intent,glyph");
  }
  std::vector<AugmentationRule> rules;
  std::size_t ordinal = 0;
  for (const auto& row : table.rows) {
    ++ordinal;
    if (row.fields.size() != table.header.size()) {
      throw LoadError(path, row.line, "expected " + std::to_string(table.header.size()) + " fields");
    }
    const auto& p = row.fields[c_priority];
    int priority = 0;
    const auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), priority);
    if (ec != std::errc() || ptr != p.data() + p.size()) throw LoadError(path, row.line, "bad priority '" + p + "'");
    const auto glyph = row.fields[c_glyph];
    if (tables) {
      const auto nc = normalize_comment(glyph, *tables);
      if (nc.tokens.size() != 1 || nc.tokens[0].span != Span{0, glyph.size()}) {
        throw LoadError(path, row.line, "glyph '" + glyph + "' is not a single emoji");
      }
    }
    try {
      rules.push_back(Rulebook::make_rule(priority, ordinal, csv::unescape_commas(row.fields[c_pattern]),
                                          row.fields[c_intent], glyph));
    } catch (const ValidationError& e) {
      throw LoadError(path, row.line, e.what());
    }
  }
  return Rulebook(std::move(rules));
}

std::vector<Suggestion> suggest_emojis(const NormalizedComment& nc, const Rulebook& rulebook, std::size_t top_n) {
  std::vector<Suggestion> out;
  if (top_n == 0) return out;
  std::unordered_set<std::string> seen;
  for (const auto& rule : rulebook.rules()) {
    if (!std::regex_search(nc.normalized, rule.regex)) continue;
    if (!seen.insert(presentation_insensitive_key(rule.glyph)).second) continue;
    out.push_back({rule.glyph, rule.intent, rule.id});
    if (out.size() == top_n) break;
  }
  return out;
}

Dataset augment_dataset(const Dataset& dataset, const Rulebook& rulebook, const CodecTables& tables,
                        std::size_t top_n, std::string name) {
  std::vector<CommentRecord> records = dataset.records;
  for (auto& r : records) {
    const auto nc = normalize_comment(r.text, tables);
    if (!nc.tokens.empty()) {
      if (!r.provenance) r.provenance = "original";
      continue;
    }
    const auto suggestions = suggest_emojis(nc, rulebook, top_n);
    if (suggestions.empty()) {
      r.provenance = "none";
      continue;
    }
    std::string ids;
    for (const auto& s : suggestions) {
      r.text += ' ';
      r.text += s.glyph;
      if (!ids.empty()) ids += '+';
      ids += s.rule_id;
    }
    r.provenance = ids;
  }
  if (name.empty()) name = dataset.name();
  return make_dataset(std::move(name), std::move(records), tables);
}

// ---------------------------------------------------------------------------
// Agreement

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
  const auto table = csv::read_rfc4180(path);
  const int c_comment = csv::column(table.header, "comment_id");
  const int c_annotator = csv::column(table.header, "annotator_id");
  const int c_glyph = csv::column(table.header, "glyph");
  if (c_comment < 0 || c_annotator < 0 || c_glyph < 0) {
    throw LoadError(path, 1, "header must be comment_id,annotator_id,glyph");
  }
  std::vector<AnnotationRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : table.rows) {
    auto field = [&](int c) { return c < static_cast<int>(row.fields.size()) ? row.fields[c] : std::string(); };
    AnnotationRecord r{field(c_comment), field(c_annotator), field(c_glyph)};
    if (r.comment_id.empty() || r.annotator_id.empty()) throw LoadError(path, row.line, "empty comment or annotator id");
    if (!seen.emplace(r.comment_id, r.annotator_id).second) {
      throw LoadError(path, row.line, "second annotation of " + r.comment_id + " by " + r.annotator_id);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::pair<std::vector<AnnotationRecord>, std::vector<AnnotationRecord>> split_annotators(
    std::span<const AnnotationRecord> records) {
  std::vector<std::string> annotators;
  for (const auto& r : records) {
    if (std::find(annotators.begin(), annotators.end(), r.annotator_id) == annotators.end()) {
      annotators.push_back(r.annotator_id);
    }
  }
  if (annotators.size() != 2) {
    throw ValidationError("expected exactly 2 annotators, found " + std::to_string(annotators.size()));
  }
  std::pair<std::vector<AnnotationRecord>, std::vector<AnnotationRecord>> out;
  for (const auto& r : records) (r.annotator_id == annotators[0] ? out.first : out.second).push_back(r);
  return out;
}

AgreementReport cohen_kappa(std::span<const AnnotationRecord> a, std::span<const AnnotationRecord> b) {
  std::unordered_map<std::string, std::string> b_by_id;
  for (const auto& r : b) {
    if (!b_by_id.emplace(r.comment_id, presentation_insensitive_key(r.glyph)).second) {
      throw ValidationError("comment " + r.comment_id + " annotated twice by the second annotator");
    }
  }
  if (a.size() != b.size()) throw ValidationError("annotators cover different comment sets");
  if (a.size() < 2) throw ValidationError("kappa needs at least 2 items");

  std::map<std::string, std::size_t> count_a;
  std::map<std::string, std::size_t> count_b;
  std::unordered_set<std::string> a_ids;
  AgreementReport report;
  report.items = a.size();
  std::size_t agree = 0;
  for (const auto& r : a) {
    if (!a_ids.insert(r.comment_id).second) {
      throw ValidationError("comment " + r.comment_id + " annotated twice by the first annotator");
    }
    const auto it = b_by_id.find(r.comment_id);
    if (it == b_by_id.end()) throw ValidationError("comment " + r.comment_id + " lacks a second annotation");
    const auto ga = presentation_insensitive_key(r.glyph);
    const auto& gb = it->second;
    ++count_a[ga];
    ++count_b[gb];
    if (ga == gb) {
      ++agree;
    } else {
      report.disagreements.push_back({r.comment_id, ga, gb});
    }
  }

  const double n = static_cast<double>(a.size());
  double expected = 0.0;
  for (const auto& [category, ca] : count_a) {
    const auto cb = count_b.find(category);
    if (cb != count_b.end()) expected += (static_cast<double>(ca) / n) * (static_cast<double>(cb->second) / n);
  }
  report.observed_agreement = static_cast<double>(agree) / n;
  report.expected_agreement = expected;
  if (expected >= 1.0) throw UndefinedError("kappa undefined: expected agreement is 1");
  report.kappa = (report.observed_agreement - expected) / (1.0 - expected);
  return report;
}

void write_agreement_csv(std::ostream& out, const AgreementReport& report) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%zu,%zu", report.kappa, report.observed_agreement,
                report.expected_agreement, report.items, report.disagreements.size());
  out << "kappa,observed_agreement,expected_agreement,items,disagreements\n" << buf << '\n';
  out << "comment_id,glyph_a,glyph_b\n";
  for (const auto& d : report.disagreements) csv::write_row(out, {d.comment_id, d.glyph_a, d.glyph_b});
}

// ---------------------------------------------------------------------------
// Frequency statistics

EmojiStats dataset_emoji_stats(const Dataset& dataset, const CodecTables& tables, bool useful_only) {
  EmojiStats stats;
  stats.dataset = dataset.name();
  stats.size = dataset.records.size();
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : dataset.records) {
    const auto nc = normalize_comment(r.text, tables);
    if (nc.tokens.empty()) continue;
    ++stats.emoji_comment_count;
    if (useful_only && r.useful != 1) continue;
    for (const auto& t : nc.tokens) {
      auto [it, fresh] = index.try_emplace(presentation_insensitive_key(t.glyph), stats.glyphs.size());
      if (fresh) stats.glyphs.push_back({t.glyph, 0});
      ++stats.glyphs[it->second].count;
    }
  }
  std::stable_sort(stats.glyphs.begin(), stats.glyphs.end(),
                   [](const GlyphCount& x, const GlyphCount& y) { return x.count > y.count; });
  return stats;
}

std::string with_thousands(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::string render_glyph_counts(std::span<const GlyphCount> glyphs) {
  std::string out;
  for (const auto& g : glyphs) {
    if (!out.empty()) out += ", ";
    out += g.glyph + "(" + std::to_string(g.count) + ")";
  }
  return out;
}

void write_stats_table(std::ostream& out, std::span<const EmojiStats> stats) {
  out << "Dataset\tSize\tEmojis in the Dataset\n";
  for (const auto& s : stats) {
    out << s.dataset << '\t' << with_thousands(s.size) << '\t' << render_glyph_counts(s.glyphs) << '\n';
  }
}

}  // namespace crmoji
