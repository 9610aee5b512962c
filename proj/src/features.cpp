#include "crmoji/features.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "crmoji/error.hpp"
#include "crmoji/parallel.hpp"
#include "crmoji/text.hpp"
#include "crmoji/utf8.hpp"

namespace crmoji {

const std::vector<std::string>& text_feature_names() {
  static const std::vector<std::string> names{"word_count",         "char_count",          "stop_word_ratio",
                                              "question_ratio",     "code_element_ratio", "flesch_reading_ease",
                                              "text_sentiment"};
  return names;
}

const std::vector<std::string>& emoji_feature_names() {
  static const std::vector<std::string> names{"emoji_count", "g_e_sum", "cr_e_sum", "unmatched_count"};
  return names;
}

double FeatureVector::at(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw std::out_of_range("no feature named " + std::string(name));
}

Stoplist load_stoplist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(path, 0, "cannot open file");
  Stoplist words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    words.insert(text::ascii_lower(line.substr(first, last - first + 1)));
  }
  return words;
}

FeatureVector extract_text_features(const NormalizedComment& nc, const Stoplist& stoplist,
                                    const SentimentChannels& channels) {
  const auto words = text::split_words(nc.stripped);
  const auto sentences = text::split_sentences(nc.stripped);
  const double n_words = static_cast<double>(words.size());
  const double n_sentences = static_cast<double>(sentences.size());

  std::size_t stop = 0;
  std::size_t code = 0;
  std::size_t syllables = 0;
  for (const auto& w : words) {
    if (stoplist.contains(w.lower)) ++stop;
    if (text::looks_like_code(w.raw)) ++code;
    syllables += static_cast<std::size_t>(text::count_syllables(w.lower));
  }
  std::size_t questions = 0;
  for (const auto& s : sentences) questions += s.terminator == '?';

  double flesch = 0.0;
  if (!words.empty() && !sentences.empty()) {
    flesch = 206.835 - 1.015 * (n_words / n_sentences) - 84.6 * (static_cast<double>(syllables) / n_words);
  }

  FeatureVector f;
  f.schema_id = kTextSchema;
  f.names = text_feature_names();
  f.values = {n_words,
              static_cast<double>(utf8::count_codepoints(nc.stripped)),
              words.empty() ? 0.0 : static_cast<double>(stop) / n_words,
              sentences.empty() ? 0.0 : static_cast<double>(questions) / n_sentences,
              words.empty() ? 0.0 : static_cast<double>(code) / n_words,
              flesch,
              channels.cr_t};
  return f;
}

FeatureVector extract_emoji_features(const NormalizedComment& nc, const SentimentChannels& channels) {
  FeatureVector f;
  f.schema_id = kEmojiSchema;
  f.names = emoji_feature_names();
  f.values = {static_cast<double>(nc.tokens.size()), channels.g_e, channels.cr_e,
              static_cast<double>(channels.unmatched_emoji_count)};
  return f;
}

std::string_view to_string(DesignMode mode) noexcept {
  switch (mode) {
    case DesignMode::TextFeatures: return "text_features";
    case DesignMode::TextPlusEmojiFeatures: return "text_emoji_features";
    case DesignMode::TextEmbedding: return "text_embedding";
    case DesignMode::FusedEmbedding: return "fused_embedding";
  }
  return "?";
}

namespace {

std::vector<std::string> numbered(std::string_view prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
  return out;
}

}  // namespace

DesignMatrix build_design_matrix(const Dataset& dataset, DesignMode mode, const FeatureResources& res,
                                 unsigned threads) {
  if (dataset.records.empty()) throw ValidationError("dataset " + dataset.name() + " has no rows");
  if (!res.codec) throw ValidationError("design matrix needs codec tables");
  const bool feature_mode = mode == DesignMode::TextFeatures || mode == DesignMode::TextPlusEmojiFeatures;
  if (feature_mode && (!res.stoplist || !res.sentiment)) {
    throw ValidationError("feature modes need a stoplist and sentiment resources");
  }
  if (!feature_mode && !res.words) throw ValidationError("embedding modes need a word vector table");
  if (mode == DesignMode::FusedEmbedding && !res.emojis) throw ValidationError("fused mode needs an emoji vector table");

  DesignMatrix m;
  m.mode = mode;
  switch (mode) {
    case DesignMode::TextFeatures: m.columns = text_feature_names(); break;
    case DesignMode::TextPlusEmojiFeatures:
      m.columns = text_feature_names();
      for (const auto& n : emoji_feature_names()) m.columns.push_back(n);
      break;
    case DesignMode::TextEmbedding: m.columns = numbered("t", res.words->dim()); break;
    case DesignMode::FusedEmbedding: {
      m.columns = numbered("t", res.words->dim());
      for (auto& n : numbered("e", res.emojis->dim())) m.columns.push_back(std::move(n));
      break;
    }
  }

  const auto& records = dataset.records;
  m.rows.resize(records.size());
  parallel_for(records.size(), threads, [&](std::size_t i) {
    const auto nc = normalize_comment(records[i].text, *res.codec);
    std::vector<double> row;
    if (feature_mode) {
      const auto channels = compute_channels(nc, *res.sentiment);
      row = extract_text_features(nc, *res.stoplist, channels).values;
      if (mode == DesignMode::TextPlusEmojiFeatures) {
        const auto e = extract_emoji_features(nc, channels).values;
        row.insert(row.end(), e.begin(), e.end());
      }
    } else if (mode == DesignMode::TextEmbedding) {
      row = embed_text(nc, *res.words, res.embedding_aggregation).vec;
    } else {
      row = embed_comment(nc, *res.words, *res.emojis, res.embedding_aggregation).fused;
    }
    m.rows[i] = std::move(row);
  });
  m.labels.reserve(records.size());
  m.ids.reserve(records.size());
  for (const auto& r : records) {
    m.labels.push_back(r.useful);
    m.ids.push_back(r.id);
  }
  return m;
}

void write_design_matrix_csv(std::ostream& out, const DesignMatrix& matrix) {
  for (const auto& c : matrix.columns) out << c << ',';
  out << "label\n";
  char buf[32];
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    for (double v : matrix.rows[r]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    out << matrix.labels[r] << '\n';
  }
}

}  // namespace crmoji
