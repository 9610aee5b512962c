#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "crmoji/error.hpp"
#include "crmoji/sentiment.hpp"
#include "fixtures.hpp"

using namespace crmoji;
using crmoji::testing::small_codec;
using crmoji::testing::TempDir;
using crmoji::testing::write_text;

namespace {

ValenceLexicon toy_lexicon() {
  ValenceLexicon lex;
  lex.entries = {{"good", 1.9}, {"bad", -2.5}, {"great", 3.1}, {"kill", -3.7}};
  lex.negators = {"not", "never", "isn't"};
  lex.intensifiers = {{"very", 1.293}, {"slightly", 0.707}};
  return lex;
}

double normalized(double s) { return s / std::sqrt(s * s + 15.0); }

const std::string kThumbs = "\U0001F44D";

}  // namespace

TEST_CASE("general emoji table scores come from the polarity counts") {
  CHECK(general_entry(100, 0, 0, 100).score == 1.0);
  CHECK(general_entry(100, 100, 0, 0).score == -1.0);
  CHECK(general_entry(4, 1, 1, 2).score == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(general_entry(0, 0, 0, 0), ValidationError);
  CHECK_THROWS_AS(general_entry(10, 1, 1, 1), ValidationError);
}

TEST_CASE("general emoji table loader validates the score column") {
  TempDir dir;
  write_text(dir.file("ok.csv"), "glyph,occurrences,negative,neutral,positive,score\n" + kThumbs + ",4,1,1,2,0.25\n");
  const auto t = load_general_emoji_table(dir.file("ok.csv"));
  REQUIRE(t.find(kThumbs) != nullptr);
  CHECK(t.find(kThumbs)->score == doctest::Approx(0.25));

  write_text(dir.file("bad.csv"), "glyph,occurrences,negative,neutral,positive,score\n" + kThumbs + ",4,1,1,2,0.3\n");
  CHECK_THROWS_AS(load_general_emoji_table(dir.file("bad.csv")), LoadError);
  write_text(dir.file("zero.csv"), "glyph,occurrences,negative,neutral,positive\n" + kThumbs + ",0,0,0,0\n");
  try {
    load_general_emoji_table(dir.file("zero.csv"));
    FAIL("expected a load error");
  } catch (const LoadError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("code-review emoji table") {
  TempDir dir;
  write_text(dir.file("cr.csv"), "glyph,score\n" + kThumbs + ",0.8\n❤️,0.9\n");
  const auto t = load_cr_emoji_table(dir.file("cr.csv"));
  CHECK(t.size() == 2);
  CHECK(t.find("❤")->score == doctest::Approx(0.9));  // presentation selector ignored
  write_text(dir.file("range.csv"), "glyph,score\n" + kThumbs + ",1.5\n");
  CHECK_THROWS_AS(load_cr_emoji_table(dir.file("range.csv")), LoadError);
}

TEST_CASE("score_text follows the lexicon rules") {
  const auto lex = toy_lexicon();
  CHECK(score_text("", lex) == 0.0);
  CHECK(score_text("nothing to see", lex) == 0.0);
  CHECK(score_text("good", lex) == doctest::Approx(normalized(1.9)).epsilon(1e-12));
  CHECK(score_text("good", lex) == doctest::Approx(0.4404).epsilon(1e-4));
  CHECK(score_text("not good", lex) == doctest::Approx(normalized(-0.74 * 1.9)).epsilon(1e-12));
  CHECK(score_text("not good", lex) == doctest::Approx(-0.3412).epsilon(1e-4));
  // negator three tokens back still counts, four does not
  CHECK(score_text("not a b good", lex) == doctest::Approx(normalized(-0.74 * 1.9)));
  CHECK(score_text("not a b c good", lex) == doctest::Approx(normalized(1.9)));
  // applied once however many negators are in the window
  CHECK(score_text("never not good", lex) == doctest::Approx(normalized(-0.74 * 1.9)));
  CHECK(score_text("very good", lex) == doctest::Approx(normalized(1.293 * 1.9)));
  CHECK(score_text("Good, GOOD!", lex) == doctest::Approx(normalized(3.8)));
}

TEST_CASE("domain overrides are consulted first") {
  auto lex = toy_lexicon();
  CHECK(score_text("kill the process", lex) < 0);
  lex.domain_overrides = {{"kill", 0.0}};
  CHECK(score_text("kill the process", lex) == 0.0);
}

TEST_CASE("score_text stays in range and a trailing positive hit never lowers a nonnegative score") {
  const auto lex = toy_lexicon();
  const std::vector<std::string> words{"good", "bad", "great", "not", "very", "slightly", "a", "the", "kill", "never"};
  std::mt19937 rng(5);
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const int n = static_cast<int>(rng() % 30);
    for (int j = 0; j < n; ++j) text += words[rng() % words.size()] + " ";
    const double s = score_text(text, lex);
    REQUIRE(std::isfinite(s));
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    if (s >= 0) CHECK(score_text(text + " x x x good", lex) >= s);
  }
}

TEST_CASE("emoji aggregation") {
  EmojiSentimentTable table(EmojiTableKind::CodeReview);
  table.add(kThumbs, {0.8});
  const auto nc = [](const std::string& s) { return normalize_comment(s, small_codec()); };

  auto empty = aggregate_emoji_sentiment({}, table);
  CHECK(empty.score == 0.0);
  CHECK(empty.unmatched == 0);

  const auto three = aggregate_emoji_sentiment(nc(kThumbs + kThumbs + kThumbs).tokens, table);
  CHECK(three.score == doctest::Approx(3 * 0.8));
  CHECK(three.unmatched == 0);

  const auto mixed = aggregate_emoji_sentiment(nc(kThumbs + " \U0001F914").tokens, table);
  CHECK(mixed.score == doctest::Approx(0.8));
  CHECK(mixed.unmatched == 1);

  const auto mean = aggregate_emoji_sentiment(nc(kThumbs + kThumbs).tokens, table, Aggregation::Mean);
  CHECK(mean.score == doctest::Approx(0.8));

  // additivity over disjoint token multisets
  const auto a = nc(kThumbs + " \U0001F914").tokens;
  const auto b = nc(kThumbs).tokens;
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  const auto whole = aggregate_emoji_sentiment(both, table);
  CHECK(whole.score == doctest::Approx(aggregate_emoji_sentiment(a, table).score +
                                        aggregate_emoji_sentiment(b, table).score));
  CHECK(whole.unmatched == 1);
}

TEST_CASE("score_combined treats emojis as scaled lexicon hits") {
  const auto lex = toy_lexicon();
  EmojiSentimentTable general;
  general.add(kThumbs, general_entry(10, 1, 2, 7));
  const double s = 0.6;
  CHECK(score_combined(normalize_comment(kThumbs, small_codec()), lex, general) ==
        doctest::Approx(4 * s / std::sqrt(16 * s * s + 15)).epsilon(1e-12));
  CHECK(score_combined(normalize_comment("", small_codec()), lex, general) == 0.0);
  for (std::string text : {"good", "not good", "very bad stuff", "plain"}) {
    CHECK(score_combined(normalize_comment(text, small_codec()), lex, general) == score_text(text, lex));
  }
}

TEST_CASE("channels") {
  const auto& res = crmoji::testing::bundled_sentiment();
  const auto& codec = crmoji::testing::bundled_codec();

  const auto plain = compute_channels(normalize_comment("this looks good, thanks", codec), res);
  CHECK(plain.g_e == 0.0);
  CHECK(plain.cr_e == 0.0);
  CHECK(plain.g_te == plain.g_t);

  const auto thumbs = compute_channels(normalize_comment(kThumbs, codec), res);
  CHECK(thumbs.g_t == 0.0);
  CHECK(thumbs.g_e == res.general_emoji.find(kThumbs)->score);
  CHECK(thumbs.cr_e == res.cr_emoji.find(kThumbs)->score);

  const auto nc = normalize_comment("nice fix :) but U+1F41B remains", codec);
  const auto x = compute_channels(nc, res);
  const auto y = compute_channels(nc, res);
  CHECK(std::memcmp(&x, &y, sizeof x) == 0);
  CHECK(x.unmatched_emoji_count <= nc.tokens.size());
}

TEST_CASE("pearson") {
  const std::vector<double> a{1, 2, 3};
  CHECK(pearson(a, std::vector<double>{2, 4, 6}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pearson(a, std::vector<double>{1, 1, 1}), UndefinedError);
  CHECK_THROWS_AS(pearson(a, std::vector<double>{1, 2}), ValidationError);
  CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), ValidationError);

  // sum dx*dy = 4, sum dx^2 = sum dy^2 = 5
  const double r = pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4});
  CHECK(std::abs(r - 4.0 / 5.0) <= 1e-12);

  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> xs(2 + rng() % 50);
    for (auto& x : xs) x = g(rng);
    const double scale = g(rng);
    if (std::abs(scale) < 1e-3) continue;
    const double shift = g(rng);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(scale * x + shift);
    CHECK(std::abs(pearson(xs, ys) - (scale > 0 ? 1.0 : -1.0)) <= 1e-9);
  }
}

TEST_CASE("correlation report") {
  std::vector<CorrelationRow> rows;
  const double scores[] = {-0.5, 0.0, 0.5};
  for (int i = 0; i < 30; ++i) {
    CorrelationRow r;
    const bool emoji = i % 3 != 0;
    r.has_emoji = emoji;
    if (emoji) {
      r.channels.cr_e = scores[i % 3];
      r.channels.g_e = scores[i % 3] * 0.9;
    }
    r.channels.g_t = 0.1 * (i % 7);
    r.channels.cr_t = r.channels.g_t;
    r.sentiment = emoji ? (scores[i % 3] > 0 ? 1 : scores[i % 3] < 0 ? -1 : 0) : static_cast<int>(i % 3) - 1;
    r.useful = i % 2;
    rows.push_back(r);
  }
  const auto m = correlation_report(rows);
  CHECK(m.cells.size() == 7 * 2 * 2);
  const auto* cell = m.find("CR_E", "sentiment", "emoji_only");
  REQUIRE(cell != nullptr);
  REQUIRE(cell->rho.has_value());
  CHECK(*cell->rho == doctest::Approx(1.0));
  CHECK(cell->n == 20);

  // G_T+G_E is the elementwise sum series
  std::vector<double> sum;
  std::vector<double> useful;
  for (const auto& r : rows) {
    sum.push_back(r.channels.g_t + r.channels.g_e);
    useful.push_back(r.useful);
  }
  CHECK(*m.find("G_T+G_E", "usefulness", "all")->rho == doctest::Approx(pearson(sum, useful)));

  for (auto& r : rows) r.useful = 1;
  const auto constant = correlation_report(rows);
  for (const auto& c : constant.cells) {
    if (c.target == "usefulness") CHECK_FALSE(c.rho.has_value());
  }
  std::ostringstream out;
  constant.write_csv(out);
  CHECK(out.str().rfind("channel,target,subset,rho,n\n", 0) == 0);
  CHECK(out.str().find("G_T,usefulness,all,,30\n") != std::string::npos);

  const auto no_sentiment = correlation_report(rows, false);
  CHECK(no_sentiment.find("G_T", "sentiment", "all") == nullptr);
}
