#include <doctest.h>

#include <sstream>

#include "crmoji/error.hpp"
#include "crmoji/features.hpp"
#include "fixtures.hpp"

using namespace crmoji;
using crmoji::testing::bundled_codec;
using crmoji::testing::bundled_sentiment;
using crmoji::testing::data_file;
using crmoji::testing::TempDir;
using crmoji::testing::write_text;

namespace {

const Stoplist& stoplist() {
  static const Stoplist s = load_stoplist(data_file("stoplist.txt"));
  return s;
}

FeatureVector text_of(const std::string& s) {
  const auto nc = normalize_comment(s, bundled_codec());
  return extract_text_features(nc, stoplist(), compute_channels(nc, bundled_sentiment()));
}

FeatureVector emoji_of(const std::string& s) {
  const auto nc = normalize_comment(s, bundled_codec());
  return extract_emoji_features(nc, compute_channels(nc, bundled_sentiment()));
}

Dataset sample_dataset() {
  std::vector<CommentRecord> records;
  const char* texts[] = {"Looks good \U0001F44D", "Why is this here?", "rename foo_bar() please", "",
                         "nice :)",           "this breaks the build", "Is this right?", ":tada: merged"};
  int i = 0;
  for (const char* t : texts) records.push_back({"c" + std::to_string(i), t, i % 2, std::nullopt, "", std::nullopt}), ++i;
  return make_dataset("sample", std::move(records), bundled_codec());
}

}  // namespace

TEST_CASE("stoplist loader") {
  TempDir dir;
  write_text(dir.file("s.txt"), "# comment\nThe\n\n  and \n");
  const auto s = load_stoplist(dir.file("s.txt"));
  CHECK(s.size() == 2);
  CHECK(s.contains("the"));
  CHECK(s.contains("and"));
  CHECK_THROWS_AS(load_stoplist(dir.file("missing.txt")), LoadError);
}

TEST_CASE("empty comment has all-zero text features") {
  const auto f = text_of("");
  CHECK(f.schema_id == kTextSchema);
  CHECK(f.names == text_feature_names());
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("text feature examples") {
  const auto q = text_of("Is this right?");
  CHECK(q.at("word_count") == 3);
  CHECK(q.at("question_ratio") == 1.0);
  CHECK(q.at("char_count") == 14);

  const auto c = text_of("call foo_bar() here");
  CHECK(c.at("code_element_ratio") == doctest::Approx(1.0 / 3.0));

  // two sentences, one a question
  CHECK(text_of("Fine. Why?").at("question_ratio") == 0.5);
  CHECK(text_of("the and").at("stop_word_ratio") == 1.0);
  CHECK_THROWS_AS(q.at("nope"), std::out_of_range);
}

TEST_CASE("flesch reading ease matches the formula") {
  // "The cat sat." 3 words, 1 sentence, 3 syllables
  const auto f = text_of("The cat sat.");
  CHECK(f.at("flesch_reading_ease") == doctest::Approx(206.835 - 1.015 * 3.0 - 84.6 * 1.0));
}

TEST_CASE("text features ignore emoji notations") {
  const auto plain = text_of("Looks good");
  const auto decorated = text_of("Looks good :+1: \U0001F44D U+1F600");
  CHECK(plain.values == decorated.values);
}

TEST_CASE("emoji features") {
  const auto none = emoji_of("no emoji here");
  CHECK(none.schema_id == kEmojiSchema);
  for (double v : none.values) CHECK(v == 0.0);

  const auto two = emoji_of("\U0001F44D\U0001F44D");
  CHECK(two.at("emoji_count") == 2);
  const auto* g = bundled_sentiment().general_emoji.find("\U0001F44D");
  REQUIRE(g != nullptr);
  CHECK(two.at("g_e_sum") == doctest::Approx(2 * g->score));
}

TEST_CASE("design matrix") {
  const auto ds = sample_dataset();
  FeatureResources res;
  res.codec = &bundled_codec();
  res.stoplist = &stoplist();
  res.sentiment = &bundled_sentiment();

  const auto t = build_design_matrix(ds, DesignMode::TextFeatures, res, 1);
  const auto te = build_design_matrix(ds, DesignMode::TextPlusEmojiFeatures, res, 1);
  CHECK(t.dim() == 7);
  CHECK(te.dim() == t.dim() + 4);
  REQUIRE(t.rows.size() == ds.records.size());
  CHECK(t.labels == std::vector<int>{0, 1, 0, 1, 0, 1, 0, 1});
  CHECK(t.ids.front() == "c0");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(std::equal(t.rows[i].begin(), t.rows[i].end(), te.rows[i].begin()));
  }

  // same output for any thread count
  const auto parallel = build_design_matrix(ds, DesignMode::TextPlusEmojiFeatures, res, 4);
  CHECK(parallel.rows == te.rows);

  std::ostringstream out;
  write_design_matrix_csv(out, t);
  CHECK(out.str().rfind("word_count,char_count,", 0) == 0);
  CHECK(out.str().find(",label\n") != std::string::npos);

  CHECK_THROWS_AS(build_design_matrix(ds, DesignMode::TextEmbedding, res), ValidationError);
  CHECK_THROWS_AS(build_design_matrix(make_dataset("empty", {}, bundled_codec()), DesignMode::TextFeatures, res),
                  ValidationError);
}

TEST_CASE("embedding design matrix") {
  const auto ds = sample_dataset();
  VectorTable words(2, VectorKind::Word);
  words.insert("good", std::vector<float>{1, 0});
  VectorTable emojis(3, VectorKind::Emoji);
  emojis.insert("\U0001F44D", std::vector<float>{0, 0, 1});
  FeatureResources res;
  res.codec = &bundled_codec();
  res.words = &words;
  CHECK_THROWS_AS(build_design_matrix(ds, DesignMode::FusedEmbedding, res), ValidationError);
  res.emojis = &emojis;
  const auto m = build_design_matrix(ds, DesignMode::FusedEmbedding, res);
  CHECK(m.columns == std::vector<std::string>{"t0", "t1", "e0", "e1", "e2"});
  CHECK(m.rows[0] == std::vector<double>{1, 0, 0, 0, 1});
  CHECK(m.rows[1] == std::vector<double>{0, 0, 0, 0, 0});
  const auto t = build_design_matrix(ds, DesignMode::TextEmbedding, res);
  CHECK(t.dim() == 2);
}
