// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit 1 on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crmoji/augmentation.hpp"
#include "crmoji/classifier.hpp"
#include "crmoji/error.hpp"
#include "crmoji/pipeline.hpp"
#include "crmoji/random.hpp"
#include "crmoji/sentiment.hpp"
#include "crmoji/utf8.hpp"
#include "fixtures.hpp"
#include "synthetic.hpp"

using namespace crmoji;
namespace fs = std::filesystem;
using testing::read_text;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Result {
  Outcome outcome = Outcome::Fail;
  std::string detail;
};

Result check(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

testing::TempDir& scratch() {
  static testing::TempDir dir;
  return dir;
}

// 1000 planted-signal comments, shared by criteria 3, 4 and 6.
const testing::SyntheticCorpus& synthetic(bool shuffled) {
  static std::map<bool, testing::SyntheticCorpus> cache;
  auto it = cache.find(shuffled);
  if (it == cache.end()) {
    testing::SyntheticOptions o;
    o.shuffle_labels = shuffled;
    const auto dir = scratch().file(shuffled ? "shuffled" : "planted");
    it = cache.emplace(shuffled, testing::write_synthetic(dir, "synthetic", o)).first;
  }
  return it->second;
}

RunConfig config_for(const testing::SyntheticCorpus& c, const std::string& out) {
  RunConfig config;
  config.paths = c.paths;
  config.out_dir = out;
  fs::create_directories(out);
  return config;
}

const std::vector<H2Mode> kBothModes{H2Mode::Features, H2Mode::Embeddings};

// ---------------------------------------------------------------------------

Result metric_oracles() {
  // tp=45 fp=5 fn=10 tn=40
  const double tp = 45, fp = 5, fn = 10, tn = 40;
  const double direct = (tp * tn - fp * fn) / std::sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn));
  const double m = mcc({45, 5, 40, 10});

  std::vector<AnnotationRecord> a, b;
  const char* ga[] = {"x", "x", "y", "y"};
  const char* gb[] = {"x", "y", "y", "y"};
  for (int i = 0; i < 4; ++i) {
    a.push_back({"c" + std::to_string(i), "A", ga[i]});
    b.push_back({"c" + std::to_string(i), "B", gb[i]});
  }
  const double k = cohen_kappa(a, b).kappa;
  const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4};
  const double r = pearson(x, y);

  const bool ok = std::abs(m - direct) <= 1e-9 && std::abs(k - 0.5) <= 1e-12 && std::abs(r - 0.8) <= 1e-12;
  return check(ok, "mcc " + fmt("%.10f", m) + " (direct " + fmt("%.10f", direct) + "), kappa " + fmt("%.12f", k) +
                       ", pearson " + fmt("%.12f", r));
}

std::string random_comment(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{
      "fix", "this", " ", " ", "\n", ".", "?", ":", ":)", ":-)", ";)", "<3", "(:", ":smile:", ":+1:", ":tada:",
      ":unknown_code:", "U+1F60A", "+U1F60A", "u+1f44d", "U+0041", "U+1F1FA", "\U0001F44D", "\U0001F44D\U0001F3FD",
      "❤", "️", "‍", "\U0001F1FA\U0001F1F8", "\U0001F1FA", "\U0001F468‍\U0001F4BB", "1️⃣",
      "é", "ß", "中文", "foo_bar()", "::", "+U", "U+"};
  std::string s;
  const auto n = rng() % 20;
  for (std::uint64_t i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

Result codec_conformance() {
  const auto& codec = testing::bundled_codec();
  const std::string target = "\U0001F60A";
  std::size_t mapped = 0;
  for (const char* input : {"+U1F60A", ":smile:", ":)"}) mapped += normalize_comment(input, codec).normalized == target;

  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(777);
  std::size_t failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto text = random_comment(rng);
    const auto nc = normalize_comment(text, codec);
    bool ok = normalize_comment(nc.normalized, codec).normalized == nc.normalized;
    for (const auto& t : nc.tokens) {
      ok &= t.span.end <= text.size() && t.span.start < t.span.end;
      ok &= text.compare(t.span.start, t.span.size(), t.source_text) == 0;
      ok &= utf8::is_valid(t.glyph);
    }
    failures += !ok;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return check(mapped == 3 && failures == 0 && secs < 10.0,
               std::to_string(mapped) + "/3 notations map to the glyph, " + std::to_string(failures) +
                   " fuzz failures in 10000, " + fmt("%.2f s", secs));
}

Result synthetic_reproduction() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream log;
  const auto& c = synthetic(false);
  const auto r = cmd_h2(config_for(c, scratch().file("c3")), {c.dataset_path}, kBothModes, log);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.deltas.size() != 2) return check(false, "expected two delta rows");
  const double f = r.deltas[0].mcc, e = r.deltas[1].mcc;
  return check(f >= 20.0 && e >= 20.0 && secs < 60.0,
               "feature dM " + format_points(f) + " pp, embedding dM " + format_points(e) + " pp, " + fmt("%.1f s", secs));
}

Result null_control() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream log;
  const auto& c = synthetic(true);
  const auto r = cmd_h2(config_for(c, scratch().file("c4")), {c.dataset_path}, kBothModes, log);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = r.metrics.size() == 4 && secs < 60.0;
  std::string detail;
  for (const auto& m : r.metrics) {
    ok &= std::abs(m.metrics.mcc) < 0.15;
    detail += m.mode + " " + fmt("%.3f", m.metrics.mcc) + ", ";
  }
  return check(ok, detail + fmt("%.1f s", secs));
}

Result no_emoji_neutrality() {
  const auto start = std::chrono::steady_clock::now();
  testing::SyntheticOptions o;
  o.with_emoji = false;
  const auto c = testing::write_synthetic(scratch().file("c5in"), "plain", o);
  std::ostringstream log;
  const auto r = cmd_h2(config_for(c, scratch().file("c5")), {c.dataset_path}, {H2Mode::Features}, log);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = r.deltas.size() == 1 && secs < 30.0;
  for (const auto& d : r.deltas) {
    ok &= d.precision == 0.0 && d.recall == 0.0 && d.accuracy == 0.0 && d.mcc == 0.0 && d.f1 == 0.0;
  }
  const auto csv = read_text(scratch().file("c5") + "/deltas.csv");
  ok &= csv == "dataset,mode,P,R,A,M,F1\nplain,features,0.0,0.0,0.0,0.0,0.0\n";
  return check(ok, "deltas row: " + csv.substr(csv.find('\n') + 1, csv.size() - csv.find('\n') - 2) + ", " +
                       fmt("%.1f s", secs));
}

Result determinism() {
  const auto& c = synthetic(false);
  std::ostringstream log;
  std::vector<std::string> dirs;
  for (unsigned threads : {4u, 4u, 1u}) {
    dirs.push_back(scratch().file("c6_" + std::to_string(dirs.size())));
    auto config = config_for(c, dirs.back());
    config.threads = threads;
    cmd_h2(config, {c.dataset_path}, kBothModes, log);
  }
  bool ok = true;
  for (const char* f : {"/metrics.csv", "/deltas.csv"}) {
    const auto first = read_text(dirs[0] + f);
    ok &= !first.empty() && read_text(dirs[1] + f) == first && read_text(dirs[2] + f) == first;
  }
  return check(ok, std::string("two 4-thread runs and a serial run ") + (ok ? "are byte-identical" : "differ"));
}

Result stratification() {
  std::vector<int> labels(102, 0);
  for (std::size_t i = 0; i < 52; ++i) labels[i] = 1;
  Rng shuffler(5);
  shuffle(std::span<int>(labels), shuffler);
  const std::uint64_t seed = 42;
  const auto folds = stratified_folds(labels, 10, seed);

  // oracle: shuffle each class with one generator, class 0 first, deal round-robin
  std::vector<std::size_t> oracle(labels.size());
  Rng rng(seed);
  for (int cls : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    shuffle(std::span<std::size_t>(members), rng);
    for (std::size_t j = 0; j < members.size(); ++j) oracle[members[j]] = j % 10;
  }

  bool ok = folds == oracle;
  std::string counts;
  for (std::size_t k = 0; k < 10; ++k) {
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (folds[i] == k) (labels[i] ? pos : neg)++;
    }
    ok &= (pos == 5 || pos == 6) && neg == 5;
    counts += std::to_string(pos) + "/" + std::to_string(neg) + (k < 9 ? " " : "");
  }
  return check(ok, "per-fold useful/not useful: " + counts + (folds == oracle ? ", matches oracle" : ", oracle mismatch"));
}

Result upstream_data() {
  const char* path = std::getenv("CRMOJI_REVHELPER");
  if (!path || !*path || !fs::exists(path)) return {Outcome::Skip, "set CRMOJI_REVHELPER to the upstream dataset file"};
  const auto ds = load_dataset(path, testing::bundled_codec());
  const auto stats = dataset_emoji_stats(ds, testing::bundled_codec());
  std::size_t thumbs = 0;
  for (const auto& g : stats.glyphs) {
    if (g.glyph == "\U0001F44D") thumbs = g.count;
  }
  return check(stats.size == 1481 && thumbs == 18,
               "size " + with_thousands(stats.size) + ", \U0001F44D occurs " + std::to_string(thumbs) + " times");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"metric oracles", metric_oracles},
      {"codec conformance", codec_conformance},
      {"synthetic emoji signal", synthetic_reproduction},
      {"shuffled-label control", null_control},
      {"emoji-free neutrality", no_emoji_neutrality},
      {"determinism", determinism},
      {"stratification", stratification},
      {"upstream statistics", upstream_data},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = r.outcome == Outcome::Pass ? "PASS" : r.outcome == Outcome::Skip ? "SKIP" : "FAIL";
    failed += r.outcome == Outcome::Fail;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, tag, criteria[i].first, r.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
