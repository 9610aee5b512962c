#include "crmoji/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "crmoji/csv.hpp"
#include "crmoji/error.hpp"

#ifndef CRMOJI_DATA_DIR
#define CRMOJI_DATA_DIR "data"
#endif

namespace crmoji {

namespace fs = std::filesystem;

std::string default_data_dir() {
  if (const char* env = std::getenv("CRMOJI_DATA_DIR"); env && *env) return env;
  return CRMOJI_DATA_DIR;
}

ResourcePaths ResourcePaths::in_dir(const std::string& dir) {
  const fs::path d(dir);
  ResourcePaths p;
  p.emoticons = (d / "emoticons.csv").string();
  p.shortcodes = (d / "shortcodes.csv").string();
  p.lexicon = (d / "lexicon.csv").string();
  p.negators = (d / "negators.csv").string();
  p.intensifiers = (d / "intensifiers.csv").string();
  p.cr_overrides = (d / "cr_overrides.csv").string();
  p.general_emoji = (d / "emoji_sentiment_general.csv").string();
  p.cr_emoji = (d / "emoji_sentiment_cr.csv").string();
  p.stoplist = (d / "stoplist.txt").string();
  p.rulebook = (d / "rulebook.csv").string();
  return p;
}

ForestParams RunConfig::forest_params() const {
  ForestParams p = forest;
  p.seed = seed;
  p.threads = threads;
  return p;
}

std::string_view to_string(H2Mode mode) noexcept { return mode == H2Mode::Features ? "features" : "embeddings"; }

H2Mode parse_h2_mode(std::string_view s) {
  if (s == "features") return H2Mode::Features;
  if (s == "embeddings") return H2Mode::Embeddings;
  throw ValidationError("unknown mode '" + std::string(s) + "' (features|embeddings)");
}

FeatureResources Resources::feature_view(Aggregation embedding_aggregation) const {
  FeatureResources f;
  f.codec = &codec;
  f.stoplist = &stoplist;
  f.sentiment = &sentiment;
  f.words = words ? &*words : nullptr;
  f.emojis = emojis ? &*emojis : nullptr;
  f.embedding_aggregation = embedding_aggregation;
  return f;
}

namespace {

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw LoadError(what, 0, "no path configured");
  if (!fs::is_regular_file(path)) throw LoadError(path, 0, std::string(what) + " file not found");
}

}  // namespace

Resources load_resources(const RunConfig& config, bool with_embeddings) {
  const auto& p = config.paths;
  require_file(p.emoticons, "emoticons");
  require_file(p.shortcodes, "shortcodes");
  if (!p.emoji_ranges.empty()) require_file(p.emoji_ranges, "emoji ranges");
  require_file(p.lexicon, "lexicon");
  require_file(p.negators, "negators");
  require_file(p.intensifiers, "intensifiers");
  require_file(p.general_emoji, "general emoji sentiment");
  require_file(p.cr_emoji, "code-review emoji sentiment");
  require_file(p.stoplist, "stoplist");
  if (!p.cr_overrides.empty()) require_file(p.cr_overrides, "code-review overrides");

  Resources r;
  r.codec = load_codec_tables(p.emoticons, p.shortcodes, p.emoji_ranges);
  r.sentiment.general = load_lexicon(p.lexicon, p.negators, p.intensifiers);
  r.sentiment.code_review = load_lexicon(p.lexicon, p.negators, p.intensifiers, p.cr_overrides);
  r.sentiment.general_emoji = load_general_emoji_table(p.general_emoji);
  r.sentiment.cr_emoji = load_cr_emoji_table(p.cr_emoji);
  r.sentiment.config.emoji_aggregation = config.emoji_sentiment_aggregation;
  r.stoplist = load_stoplist(p.stoplist);
  if (with_embeddings) {
    require_file(p.word_vectors, "word vectors");
    require_file(p.emoji_vectors, "emoji vectors");
    r.words = load_vectors(p.word_vectors, VectorKind::Word);
    r.emojis = load_vectors(p.emoji_vectors, VectorKind::Emoji);
  }
  return r;
}

namespace {

std::vector<Dataset> load_all(const std::vector<std::string>& paths, const CodecTables& codec) {
  if (paths.empty()) throw ValidationError("no dataset given");
  std::vector<Dataset> out;
  for (const auto& p : paths) out.push_back(load_dataset(p, codec));
  return out;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  const auto path = (fs::path(config.out_dir) / name).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  return out;
}

CorrelationMatrix emoji_only_cells(CorrelationMatrix m) {
  std::erase_if(m.cells, [](const CorrelationCell& c) { return c.subset != "emoji_only"; });
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// H1

H1Result run_h1(const RunConfig& config, const Resources& resources, const std::vector<Dataset>& datasets, Log& log) {
  H1Result result;
  std::vector<CorrelationRow> pooled;
  bool any_sentiment_pooled = false;
  for (const auto& d : datasets) {
    std::vector<CorrelationRow> rows;
    rows.reserve(d.records.size());
    bool any_sentiment = false;
    for (const auto& r : d.records) {
      const auto nc = normalize_comment(r.text, resources.codec);
      CorrelationRow row;
      row.channels = compute_channels(nc, resources.sentiment);
      row.has_emoji = !nc.tokens.empty();
      row.sentiment = r.sentiment;
      row.useful = r.useful;
      any_sentiment |= r.sentiment.has_value();
      rows.push_back(row);
    }
    if (!any_sentiment) log << "warning: " << d.name() << " has no sentiment labels; usefulness only\n";
    any_sentiment_pooled |= any_sentiment;
    auto matrix = correlation_report(rows, any_sentiment);
    if (config.emoji_only) matrix = emoji_only_cells(std::move(matrix));
    result.per_dataset.emplace_back(d.name(), std::move(matrix));
    pooled.insert(pooled.end(), rows.begin(), rows.end());
  }
  result.pooled = correlation_report(pooled, any_sentiment_pooled);
  if (config.emoji_only) result.pooled = emoji_only_cells(std::move(result.pooled));
  return result;
}

H1Result cmd_h1(const RunConfig& config, const std::vector<std::string>& dataset_paths, Log& log) {
  const auto resources = load_resources(config, false);
  const auto datasets = load_all(dataset_paths, resources.codec);
  auto result = run_h1(config, resources, datasets, log);
  {
    auto out = open_output(config, "correlations.csv");
    result.pooled.write_csv(out);
  }
  for (const auto& [name, matrix] : result.per_dataset) {
    auto out = open_output(config, "correlations." + name + ".csv");
    matrix.write_csv(out);
  }
  return result;
}

// ---------------------------------------------------------------------------
// H2

namespace {

std::pair<DesignMode, DesignMode> design_pair(H2Mode mode) {
  return mode == H2Mode::Features
             ? std::pair{DesignMode::TextFeatures, DesignMode::TextPlusEmojiFeatures}
             : std::pair{DesignMode::TextEmbedding, DesignMode::FusedEmbedding};
}

void evaluate_dataset(const RunConfig& config, const Resources& resources, const Dataset& d, std::size_t k,
                      const std::vector<H2Mode>& modes, H2Result& result) {
  const auto view = resources.feature_view(config.embedding_aggregation);
  const auto params = config.forest_params();
  for (const auto mode : modes) {
    const auto [base_mode, emoji_mode] = design_pair(mode);
    const auto base = build_design_matrix(d, base_mode, view, config.threads);
    const auto with = build_design_matrix(d, emoji_mode, view, config.threads);
    MetricsRow without_row{d.name(), std::string(to_string(base_mode)), evaluate_cv({base.rows, base.labels}, k, params)};
    MetricsRow with_row{d.name(), std::string(to_string(emoji_mode)), evaluate_cv({with.rows, with.labels}, k, params)};
    result.deltas.push_back(delta_report(with_row, without_row, std::string(to_string(mode))));
    result.metrics.push_back(std::move(without_row));
    result.metrics.push_back(std::move(with_row));
  }
}

}  // namespace

H2Result run_h2(const RunConfig& config, const Resources& resources, const std::vector<Dataset>& datasets,
                const std::vector<H2Mode>& modes, Log& log) {
  if (modes.empty()) throw ValidationError("no mode given");
  if (config.folds < 2) throw ValidationError("folds must be at least 2");
  H2Result result;
  if (!config.emoji_only) {
    for (const auto& d : datasets) evaluate_dataset(config, resources, d, config.folds, modes, result);
  }
  if (config.emoji_only || datasets.size() >= 2) {
    const auto all = filter_emoji_only(datasets, resources.codec);
    const std::size_t smaller = std::min(all.manifest.useful_count, all.manifest.not_useful_count);
    std::size_t k = config.folds;
    if (smaller < k) {
      k = smaller;
      log << "warning: " << all.name() << " has a class of " << smaller << " comments; folds reduced to " << k
          << '\n';
    }
    if (k < 2) {
      log << "warning: " << all.name() << " is too small to cross-validate; skipped\n";
    } else {
      evaluate_dataset(config, resources, all, k, modes, result);
    }
  }
  return result;
}

H2Result cmd_h2(const RunConfig& config, const std::vector<std::string>& dataset_paths,
                const std::vector<H2Mode>& modes, Log& log) {
  const bool embeddings = std::find(modes.begin(), modes.end(), H2Mode::Embeddings) != modes.end();
  const auto resources = load_resources(config, embeddings);
  const auto datasets = load_all(dataset_paths, resources.codec);
  auto result = run_h2(config, resources, datasets, modes, log);
  {
    auto out = open_output(config, "metrics.csv");
    write_metrics_csv(out, result.metrics);
  }
  {
    auto out = open_output(config, "deltas.csv");
    write_delta_csv(out, result.deltas);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Utilities

void cmd_normalize(const RunConfig& config, std::istream& in, std::ostream& out, bool as_json) {
  const auto& p = config.paths;
  const auto codec = load_codec_tables(p.emoticons, p.shortcodes, p.emoji_ranges);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto nc = normalize_comment(line, codec);
    if (!as_json) {
      out << nc.normalized << '\n';
      continue;
    }
    nlohmann::json tokens = nlohmann::json::array();
    for (const auto& t : nc.tokens) {
      tokens.push_back({{"glyph", t.glyph},
                        {"form", to_string(t.source_form)},
                        {"source", t.source_text},
                        {"span", {t.span.start, t.span.end}}});
    }
    nlohmann::json j = {{"normalized", nc.normalized}, {"stripped", nc.stripped}, {"tokens", tokens}};
    out << j.dump() << '\n';
  }
}

void cmd_score(const RunConfig& config, std::istream& in, std::ostream& out) {
  const auto resources = load_resources(config, false);
  out << "g_t,cr_t,g_e,cr_e,g_te,unmatched\n";
  std::string line;
  char buf[192];
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto c = compute_channels(normalize_comment(line, resources.codec), resources.sentiment);
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,%.4f,%.4f,%zu\n", c.g_t, c.cr_t, c.g_e, c.cr_e, c.g_te,
                  c.unmatched_emoji_count);
    out << buf;
  }
}

std::string cmd_stats(const RunConfig& config, const std::vector<std::string>& dataset_paths) {
  const auto& p = config.paths;
  const auto codec = load_codec_tables(p.emoticons, p.shortcodes, p.emoji_ranges);
  std::vector<EmojiStats> stats;
  for (const auto& d : load_all(dataset_paths, codec)) {
    stats.push_back(dataset_emoji_stats(d, codec, config.useful_only));
  }
  std::ostringstream text;
  write_stats_table(text, stats);
  auto out = open_output(config, "stats.txt");
  out << text.str();
  return text.str();
}

Dataset cmd_augment(const RunConfig& config, const std::string& dataset_path, const std::string& output_path) {
  const auto& p = config.paths;
  const auto codec = load_codec_tables(p.emoticons, p.shortcodes, p.emoji_ranges);
  require_file(p.rulebook, "rulebook");
  const auto rulebook = load_rulebook(p.rulebook, &codec);
  const auto input = load_dataset(dataset_path, codec);
  if (fs::exists(output_path) && fs::equivalent(output_path, dataset_path)) {
    throw ValidationError("refusing to overwrite the input dataset");
  }
  auto augmented = augment_dataset(input, rulebook, codec, config.top_n, dataset_name_for_path(output_path));
  const auto parent = fs::path(output_path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  write_dataset(augmented, output_path, format_for_path(output_path));
  write_manifest(augmented.manifest, parent.empty() ? "." : parent.string());
  return augmented;
}

AgreementReport cmd_kappa(const RunConfig& config, const std::vector<std::string>& annotation_paths) {
  std::vector<AnnotationRecord> a;
  std::vector<AnnotationRecord> b;
  if (annotation_paths.size() == 1) {
    const auto records = load_annotations(annotation_paths[0]);
    std::tie(a, b) = split_annotators(records);
  } else if (annotation_paths.size() == 2) {
    a = load_annotations(annotation_paths[0]);
    b = load_annotations(annotation_paths[1]);
  } else {
    throw ValidationError("kappa takes one or two annotation files");
  }
  const auto report = cohen_kappa(a, b);
  auto out = open_output(config, "agreement.csv");
  write_agreement_csv(out, report);
  return report;
}

}  // namespace crmoji
