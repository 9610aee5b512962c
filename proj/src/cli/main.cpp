// crmoji command-line entry point.
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crmoji/error.hpp"
#include "crmoji/pipeline.hpp"

namespace {

std::string error_kind(const crmoji::Error& e) {
  if (dynamic_cast<const crmoji::LoadError*>(&e)) return "load";
  if (dynamic_cast<const crmoji::ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const crmoji::UndefinedError*>(&e)) return "undefined";
  return "runtime";
}

// Keeps failures to one line however the message was built.
std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

crmoji::Aggregation parse_aggregation(const std::string& s) {
  if (s == "sum") return crmoji::Aggregation::Sum;
  if (s == "mean") return crmoji::Aggregation::Mean;
  throw crmoji::ValidationError("aggregation must be sum or mean, got '" + s + "'");
}

void apply_max_features(crmoji::ForestParams& p, const std::string& s) {
  if (s == "sqrt") {
    p.max_features = crmoji::MaxFeatures::Sqrt;
  } else if (s == "all") {
    p.max_features = crmoji::MaxFeatures::All;
  } else {
    std::size_t k = 0;
    try {
      k = std::stoul(s);
    } catch (const std::exception&) {
      throw crmoji::ValidationError("max-features must be sqrt, all or a count, got '" + s + "'");
    }
    p.max_features = crmoji::MaxFeatures::Fixed;
    p.fixed_features = k;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emoji-aware code review comment analysis"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; flags given on the command line win");

  crmoji::RunConfig config;
  config.paths = {};  // filled from --data-dir after parsing
  std::string data_dir = crmoji::default_data_dir();
  std::vector<std::string> datasets;
  std::vector<std::string> modes{"features"};
  std::string emoji_aggregation = "sum";
  std::string embedding_aggregation = "mean";
  std::string max_features = "sqrt";
  std::size_t max_depth = 0;
  auto& p = config.paths;

  app.add_option("--dataset", datasets, "dataset file (.csv or .jsonl)");
  app.add_option("--mode", modes, "features, embeddings or both")->check(CLI::IsMember({"features", "embeddings"}));
  app.add_option("--seed", config.seed, "seed for folds and forests")->capture_default_str();
  app.add_option("--folds", config.folds, "cross-validation folds")->capture_default_str();
  app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
  app.add_flag("--emoji-only", config.emoji_only, "h1: emoji-only cells; h2: evaluate D_all only");
  app.add_option("--threads", config.threads, "worker threads, 0 = all cores (results do not depend on it)");
  app.add_option("--trees", config.forest.n_trees, "trees per forest")->capture_default_str();
  app.add_option("--max-depth", max_depth, "tree depth limit, 0 = unlimited");
  app.add_option("--min-leaf", config.forest.min_samples_leaf, "minimum samples per leaf")->capture_default_str();
  app.add_option("--max-features", max_features, "sqrt, all or a count")->capture_default_str();
  app.add_option("--emoji-aggregation", emoji_aggregation, "emoji sentiment aggregation: sum or mean")
      ->capture_default_str();
  app.add_option("--embedding-aggregation", embedding_aggregation, "embedding aggregation: sum or mean")
      ->capture_default_str();
  app.add_option("--data-dir", data_dir, "directory with the default resource tables")->capture_default_str();
  app.add_option("--emoticons", p.emoticons, "emoticon table (default <data-dir>/emoticons.csv)");
  app.add_option("--shortcodes", p.shortcodes, "shortcode table");
  app.add_option("--emoji-ranges", p.emoji_ranges, "emoji codepoint ranges (default: compiled in)");
  app.add_option("--lexicon", p.lexicon, "valence lexicon");
  app.add_option("--negators", p.negators, "negator list");
  app.add_option("--intensifiers", p.intensifiers, "intensifier table");
  app.add_option("--cr-overrides", p.cr_overrides, "code-review valence overrides");
  app.add_option("--general-emoji", p.general_emoji, "general emoji sentiment table");
  app.add_option("--cr-emoji", p.cr_emoji, "code-review emoji sentiment table");
  app.add_option("--stoplist", p.stoplist, "stop word list");
  app.add_option("--rulebook", p.rulebook, "augmentation rulebook");
  app.add_option("--word-vectors", p.word_vectors, "word vector file");
  app.add_option("--emoji-vectors", p.emoji_vectors, "emoji vector file");

  auto* h1 = app.add_subcommand("h1", "sentiment channel correlations");
  auto* h2 = app.add_subcommand("h2", "usefulness prediction with and without emoji information");
  auto* normalize = app.add_subcommand("normalize", "rewrite emoji notations to glyphs, stdin to stdout");
  bool as_json = false;
  std::string text;
  normalize->add_flag("--json", as_json, "print tokens as JSON");
  normalize->add_option("--text", text, "normalize this text instead of stdin");
  auto* score = app.add_subcommand("score", "sentiment channels per line, stdin to stdout");
  score->add_option("--text", text, "score this text instead of stdin");
  auto* stats = app.add_subcommand("stats", "emoji frequency table");
  stats->add_flag("--useful-only", config.useful_only, "count glyphs in Useful comments only");
  auto* augment = app.add_subcommand("augment", "append rulebook emojis to emoji-free comments");
  std::string output;
  augment->add_option("--output", output, "augmented dataset path")->required();
  augment->add_option("--top-n", config.top_n, "glyphs appended per comment")->capture_default_str();
  auto* kappa = app.add_subcommand("kappa", "Cohen's kappa between two annotators");
  std::vector<std::string> annotations;
  kappa->add_option("annotations", annotations, "one file with two annotators, or one file per annotator")
      ->required()
      ->check(CLI::ExistingFile);
  for (auto* sub : {h1, h2, normalize, score, stats, augment, kappa}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    // explicit paths win over --data-dir
    const auto defaults = crmoji::ResourcePaths::in_dir(data_dir);
    auto fill = [](std::string& target, const std::string& fallback) {
      if (target.empty()) target = fallback;
    };
    fill(p.emoticons, defaults.emoticons);
    fill(p.shortcodes, defaults.shortcodes);
    fill(p.lexicon, defaults.lexicon);
    fill(p.negators, defaults.negators);
    fill(p.intensifiers, defaults.intensifiers);
    fill(p.cr_overrides, defaults.cr_overrides);
    fill(p.general_emoji, defaults.general_emoji);
    fill(p.cr_emoji, defaults.cr_emoji);
    fill(p.stoplist, defaults.stoplist);
    fill(p.rulebook, defaults.rulebook);
    config.emoji_sentiment_aggregation = parse_aggregation(emoji_aggregation);
    config.embedding_aggregation = parse_aggregation(embedding_aggregation);
    apply_max_features(config.forest, max_features);
    if (max_depth > 0) config.forest.max_depth = max_depth;

    if (*h1) {
      crmoji::cmd_h1(config, datasets, std::cerr);
    } else if (*h2) {
      std::vector<crmoji::H2Mode> parsed;
      for (const auto& m : modes) {
        const auto mode = crmoji::parse_h2_mode(m);
        if (std::find(parsed.begin(), parsed.end(), mode) == parsed.end()) parsed.push_back(mode);
      }
      crmoji::cmd_h2(config, datasets, parsed, std::cerr);
    } else if (*normalize) {
      if (normalize->count("--text")) {
        std::istringstream in(text);
        crmoji::cmd_normalize(config, in, std::cout, as_json);
      } else {
        crmoji::cmd_normalize(config, std::cin, std::cout, as_json);
      }
    } else if (*score) {
      if (score->count("--text")) {
        std::istringstream in(text);
        crmoji::cmd_score(config, in, std::cout);
      } else {
        crmoji::cmd_score(config, std::cin, std::cout);
      }
    } else if (*stats) {
      std::cout << crmoji::cmd_stats(config, datasets);
    } else if (*augment) {
      if (datasets.size() != 1) throw crmoji::ValidationError("augment takes exactly one --dataset");
      const auto d = crmoji::cmd_augment(config, datasets[0], output);
      std::cout << d.manifest.size << " comments, " << d.manifest.emoji_comment_count << " with emojis\n";
    } else if (*kappa) {
      const auto report = crmoji::cmd_kappa(config, annotations);
      std::printf("kappa %.6f (p_o %.6f, p_e %.6f, %zu items, %zu disagreements)\n", report.kappa,
                  report.observed_agreement, report.expected_agreement, report.items, report.disagreements.size());
    }
  } catch (const crmoji::Error& e) {
    std::cerr << "error: " << error_kind(e) << ": " << one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}
