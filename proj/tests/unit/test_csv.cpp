#include <doctest.h>

#include <random>
#include <sstream>

#include "crmoji/csv.hpp"
#include "crmoji/error.hpp"

using namespace crmoji;

TEST_CASE("plain tables split on commas and unescape them") {
  const auto t = csv::parse_plain("\xEF\xBB\xBFpattern,glyph\r\n\na\\u002Cb,x\n", "t");
  REQUIRE(t.header == std::vector<std::string>{"pattern", "glyph"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].line == 3);
  CHECK(csv::unescape_commas(t.rows[0].fields[0]) == "a,b");
}

TEST_CASE("RFC 4180 quoting") {
  const auto t = csv::parse_rfc4180("id,text\n1,\"a, \"\"b\"\"\nc\"\n2,plain\n", "t");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].fields[1] == "a, \"b\"\nc");
  CHECK(t.rows[1].line == 4);
  CHECK(t.rows[1].fields[1] == "plain");
}

TEST_CASE("unterminated quote is a load error") {
  CHECK_THROWS_AS(csv::parse_rfc4180("a\n\"open\n", "t"), LoadError);
}

TEST_CASE("write_row then parse returns the same fields") {
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> fields(1 + rng() % 4);
    for (auto& f : fields) {
      const auto n = rng() % 6;
      for (unsigned j = 0; j < n; ++j) {
        static const std::vector<std::string> pieces{"a", "b", " ", ",", "\"", "\n", ";", "é", "👍"};
        f += pieces[rng() % pieces.size()];
      }
    }
    std::ostringstream out;
    csv::write_row(out, {"h"});
    csv::write_row(out, fields);
    const auto t = csv::parse_rfc4180(out.str(), "t");
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].fields == fields);
  }
}

TEST_CASE("column lookup") {
  CHECK(csv::column({"a", "b"}, "b") == 1);
  CHECK(csv::column({"a", "b"}, "c") == -1);
}
