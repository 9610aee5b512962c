#include <doctest.h>

#include <random>
#include <sstream>

#include "crmoji/augmentation.hpp"
#include "crmoji/error.hpp"
#include "fixtures.hpp"

using namespace crmoji;
using crmoji::testing::bundled_codec;
using crmoji::testing::data_file;
using crmoji::testing::TempDir;
using crmoji::testing::write_text;

namespace {

const Rulebook& rulebook() {
  static const Rulebook r = load_rulebook(data_file("rulebook.csv"), &bundled_codec());
  return r;
}

std::vector<Suggestion> suggest(const std::string& text, std::size_t top_n = 1) {
  return suggest_emojis(normalize_comment(text, bundled_codec()), rulebook(), top_n);
}

std::vector<AnnotationRecord> annotator(const std::string& who, const std::vector<std::string>& glyphs) {
  std::vector<AnnotationRecord> out;
  for (std::size_t i = 0; i < glyphs.size(); ++i) out.push_back({"c" + std::to_string(i), who, glyphs[i]});
  return out;
}

Dataset review_dataset() {
  std::vector<CommentRecord> r{
      {"1", "Do you want a space after the comma?", 1, std::nullopt, "", std::nullopt},
      {"2", "LGTM", 1, std::nullopt, "", std::nullopt},
      {"3", "\U0001F44D already decorated", 0, std::nullopt, "", std::nullopt},
      {"4", "ok", 0, std::nullopt, "", std::nullopt},
      {"5", "nit: typo here", 1, std::nullopt, "", std::nullopt},
  };
  return make_dataset("R", std::move(r), bundled_codec());
}

}  // namespace

TEST_CASE("bundled rulebook loads in priority order") {
  const auto& rules = rulebook().rules();
  REQUIRE(rules.size() == 8);
  for (std::size_t i = 1; i < rules.size(); ++i) CHECK(rules[i - 1].priority <= rules[i].priority);
  CHECK(rules[0].id == "r1");
}

TEST_CASE("suggestions") {
  const auto q = suggest("Do you want a space after the comma?");
  REQUIRE(q.size() == 1);
  CHECK(q[0].glyph == "\U0001F914");
  CHECK(q[0].intent == "question");
  CHECK(suggest("plain statement").empty());
  CHECK(suggest("Looks good")[0].glyph == "\U0001F44D");
  // approval outranks the question rule
  CHECK(suggest("LGTM?")[0].glyph == "\U0001F44D");
  const auto two = suggest("LGTM?", 2);
  REQUIRE(two.size() == 2);
  CHECK(two[1].glyph == "\U0001F914");
  // patterns are case-insensitive
  CHECK(suggest("THANKS")[0].intent == "praise");
}

TEST_CASE("equal priorities keep file order") {
  TempDir dir;
  write_text(dir.file("r.csv"),
             "priority,pattern,intent,glyph\n2,foo,b,\U0001F41B\n1,bar,a,\U0001F44D\n2,foo,c,\U0001F914\n");
  const auto r = load_rulebook(dir.file("r.csv"), &bundled_codec());
  CHECK(r.rules()[0].id == "r2");
  CHECK(r.rules()[1].id == "r1");
  CHECK(r.rules()[2].id == "r3");
  const auto s = suggest_emojis(normalize_comment("foo", bundled_codec()), r, 5);
  REQUIRE(s.size() == 2);
  CHECK(s[0].rule_id == "r1");
  CHECK(s[1].rule_id == "r3");
}

TEST_CASE("rulebook validation") {
  TempDir dir;
  write_text(dir.file("bad_regex.csv"), "priority,pattern,intent,glyph\n1,(unclosed,x,\U0001F44D\n");
  CHECK_THROWS(load_rulebook(dir.file("bad_regex.csv")));
  write_text(dir.file("two.csv"), "priority,pattern,intent,glyph\n1,x,x,\U0001F44D\U0001F44D\n");
  CHECK_THROWS(load_rulebook(dir.file("two.csv"), &bundled_codec()));
  write_text(dir.file("text.csv"), "priority,pattern,intent,glyph\n1,x,x,yes\n");
  CHECK_THROWS(load_rulebook(dir.file("text.csv"), &bundled_codec()));
  CHECK_THROWS_AS(Rulebook::make_rule(1, 1, "x", "i", ""), ValidationError);
}

TEST_CASE("augmentation") {
  const auto ds = review_dataset();
  const auto out = augment_dataset(ds, rulebook(), bundled_codec(), 1, "R_aug");
  CHECK(out.name() == "R_aug");
  REQUIRE(out.records.size() == 5);
  CHECK(out.records[0].text == "Do you want a space after the comma? \U0001F914");
  CHECK(out.records[0].provenance == "r5");
  CHECK(out.records[2].text == ds.records[2].text);
  CHECK(out.records[2].provenance == "original");
  CHECK(out.records[3].text == "ok");
  CHECK(out.records[3].provenance == "none");
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    CHECK(out.records[i].useful == ds.records[i].useful);
    CHECK(out.records[i].id == ds.records[i].id);
  }
  CHECK(out.manifest.emoji_comment_count == 4);

  const auto two = augment_dataset(ds, rulebook(), bundled_codec(), 2, "R_aug");
  CHECK(two.records[4].provenance == "r2+r4");

  // already-decorated output is left alone
  CHECK(augment_dataset(out, rulebook(), bundled_codec(), 1, "R_aug").records == out.records);
}

TEST_CASE("kappa") {
  const auto a = annotator("A", {"x", "x", "y", "y"});
  const auto b = annotator("B", {"x", "y", "y", "y"});
  const auto r = cohen_kappa(a, b);
  CHECK(r.observed_agreement == doctest::Approx(0.75));
  CHECK(r.expected_agreement == doctest::Approx(0.5));
  CHECK(r.kappa == doctest::Approx(0.5));
  CHECK(r.items == 4);
  REQUIRE(r.disagreements.size() == 1);
  CHECK(r.disagreements[0].comment_id == "c1");

  CHECK(cohen_kappa(annotator("A", {"x", "y", ""}), annotator("B", {"x", "y", ""})).kappa == doctest::Approx(1.0));
  // presentation selector does not count as a disagreement
  CHECK(cohen_kappa(annotator("A", {"❤️", "x"}), annotator("B", {"❤", "x"})).kappa == doctest::Approx(1.0));

  CHECK_THROWS_AS(cohen_kappa(annotator("A", {"x", "x"}), annotator("B", {"x", "x"})), UndefinedError);
  CHECK_THROWS_AS(cohen_kappa(annotator("A", {"x"}), annotator("B", {"x"})), ValidationError);
  CHECK_THROWS_AS(cohen_kappa(annotator("A", {"x", "y"}), annotator("B", {"x", "y", "z"})), ValidationError);
}

TEST_CASE("kappa is invariant under relabeling categories") {
  std::mt19937 rng(2);
  const std::vector<std::string> cats{"a", "b", "c", ""};
  const std::vector<std::string> renamed{"\U0001F44D", "\U0001F914", "z", "q"};
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> ga, gb, ra, rb;
    for (int i = 0; i < 20; ++i) {
      const auto x = rng() % 4, y = rng() % 4;
      ga.push_back(cats[x]);
      gb.push_back(cats[y]);
      ra.push_back(renamed[x]);
      rb.push_back(renamed[y]);
    }
    const auto a = annotator("A", ga), b = annotator("B", gb);
    double k = 0;
    try {
      k = cohen_kappa(a, b).kappa;
    } catch (const UndefinedError&) {
      continue;
    }
    CHECK(cohen_kappa(annotator("A", ra), annotator("B", rb)).kappa == doctest::Approx(k));
    CHECK(cohen_kappa(b, a).kappa == doctest::Approx(k));
    CHECK(k <= 1.0 + 1e-12);
  }
}

TEST_CASE("annotation files") {
  TempDir dir;
  write_text(dir.file("a.csv"), "comment_id,annotator_id,glyph\n1,A,\U0001F44D\n1,B,\U0001F44D\n2,A,\n2,B,\U0001F914\n");
  const auto recs = load_annotations(dir.file("a.csv"));
  CHECK(recs.size() == 4);
  const auto [a, b] = split_annotators(recs);
  CHECK(a.size() == 2);
  CHECK(a[0].annotator_id == "A");
  CHECK(a[1].glyph.empty());

  write_text(dir.file("dup.csv"), "comment_id,annotator_id,glyph\n1,A,x\n1,A,y\n");
  CHECK_THROWS_AS(load_annotations(dir.file("dup.csv")), LoadError);
  write_text(dir.file("three.csv"), "comment_id,annotator_id,glyph\n1,A,x\n1,B,y\n1,C,y\n");
  CHECK_THROWS_AS(split_annotators(load_annotations(dir.file("three.csv"))), ValidationError);

  std::ostringstream out;
  write_agreement_csv(out, cohen_kappa(annotator("A", {"x", "x", "y", "y"}), annotator("B", {"x", "y", "y", "y"})));
  CHECK(out.str().rfind("kappa,observed_agreement,expected_agreement,items,disagreements\n", 0) == 0);
  CHECK(out.str().find("comment_id,glyph_a,glyph_b\nc1,x,y\n") != std::string::npos);
}

TEST_CASE("emoji frequency statistics") {
  CHECK(with_thousands(0) == "0");
  CHECK(with_thousands(999) == "999");
  CHECK(with_thousands(1481) == "1,481");
  CHECK(with_thousands(1234567) == "1,234,567");

  std::vector<CommentRecord> r;
  for (int i = 0; i < 6; ++i) r.push_back({std::to_string(i), "\U0001F44D\U0001F44D\U0001F44D", i % 2, std::nullopt, "", std::nullopt});
  r.push_back({"x", ":smile: and :)", 1, std::nullopt, "", std::nullopt});
  r.push_back({"y", "nothing", 0, std::nullopt, "", std::nullopt});
  const auto ds = make_dataset("S", std::move(r), bundled_codec());
  const auto s = dataset_emoji_stats(ds, bundled_codec());
  CHECK(s.size == 8);
  CHECK(s.emoji_comment_count == 7);
  REQUIRE_FALSE(s.glyphs.empty());
  CHECK(s.glyphs[0] == GlyphCount{"\U0001F44D", 18});
  CHECK(render_glyph_counts(std::span(s.glyphs).first(1)) == "\U0001F44D(18)");

  const auto useful = dataset_emoji_stats(ds, bundled_codec(), true);
  CHECK(useful.size == 8);
  CHECK(useful.glyphs[0].count == 9);

  std::ostringstream out;
  const std::vector<EmojiStats> all{s};
  write_stats_table(out, all);
  CHECK(out.str().rfind("Dataset\tSize\tEmojis in the Dataset\nS\t8\t\U0001F44D(18)", 0) == 0);
}
