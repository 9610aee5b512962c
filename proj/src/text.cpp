#include "crmoji/text.hpp"

#include <algorithm>
#include <cctype>

namespace crmoji::text {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) { return is_alnum(c) || c == '_'; }

constexpr std::string_view kRightQuote = "\xE2\x80\x99";  // U+2019

std::string fold_apostrophes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s.substr(i, kRightQuote.size()) == kRightQuote) {
      out.push_back('\'');
      i += kRightQuote.size();
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
    default: return false;
  }
}

}  // namespace

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Word> split_words(std::string_view text) {
  std::vector<Word> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    if (start == pos) break;
    const std::string raw = fold_apostrophes(text.substr(start, pos - start));
    std::size_t lo = 0;
    std::size_t hi = raw.size();
    while (lo < hi && is_punct(raw[lo])) ++lo;
    while (hi > lo && is_punct(raw[hi - 1])) --hi;
    if (lo == hi) continue;
    words.push_back({raw, ascii_lower(std::string_view(raw).substr(lo, hi - lo))});
  }
  return words;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  for (auto& w : split_words(text)) tokens.push_back(std::move(w.lower));
  return tokens;
}

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> sentences;
  std::size_t start = 0;
  auto flush = [&](std::size_t end, char terminator) {
    std::size_t lo = start;
    std::size_t hi = end;
    while (lo < hi && is_space(text[lo])) ++lo;
    while (hi > lo && is_space(text[hi - 1])) --hi;
    if (lo < hi) sentences.push_back({std::string(text.substr(lo, hi - lo)), terminator});
    start = end + 1;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' || c == '!' || c == '?' || c == '\n') flush(i, c);
  }
  if (start < text.size()) flush(text.size(), '\0');
  return sentences;
}

int count_syllables(std::string_view word) {
  const std::string lower = ascii_lower(word);
  int groups = 0;
  bool in_group = false;
  char last_alpha = '\0';
  for (char c : lower) {
    if (!is_alpha(c)) {
      in_group = false;
      continue;
    }
    last_alpha = c;
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  // Silent trailing 'e': "code", "make". Not "the" or "be" (single group).
  if (last_alpha == 'e' && groups > 1) {
    const auto n = lower.find_last_of('e');
    if (n > 0 && !is_vowel(lower[n - 1])) --groups;
  }
  return groups < 1 ? 1 : groups;
}

bool looks_like_code(std::string_view raw) {
  // Trailing sentence punctuation is not part of the identifier.
  while (!raw.empty() && (raw.back() == ',' || raw.back() == ';' || raw.back() == ':' || raw.back() == '.' ||
                          raw.back() == '!' || raw.back() == '?')) {
    raw.remove_suffix(1);
  }
  while (!raw.empty() && (raw.front() == '`' || raw.front() == '\'' || raw.front() == '"')) raw.remove_prefix(1);
  while (!raw.empty() && (raw.back() == '`' || raw.back() == '\'' || raw.back() == '"')) raw.remove_suffix(1);
  if (raw.empty()) return false;

  // call: ident(...)
  const auto paren = raw.find('(');
  if (paren != std::string_view::npos && paren > 0 && raw.back() == ')' && is_ident_char(raw[paren - 1])) return true;

  // snake_case: '_' with word characters on both sides
  for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
    if (raw[i] == '_' && is_alnum(raw[i - 1]) && is_alnum(raw[i + 1])) return true;
  }

  // camelCase: starts lowercase, later an uppercase letter after a lowercase one
  if (std::islower(static_cast<unsigned char>(raw[0]))) {
    bool all_ident = true;
    bool hump = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!is_ident_char(raw[i])) all_ident = false;
      if (i > 0 && std::isupper(static_cast<unsigned char>(raw[i])) &&
          std::islower(static_cast<unsigned char>(raw[i - 1]))) {
        hump = true;
      }
    }
    if (all_ident && hump) return true;
  }

  // dotted path: ident(.ident)+ where each segment starts with a letter or '_';
  // all one-letter segments is an abbreviation (e.g., i.e.)
  std::size_t segments = 0;
  std::size_t longest = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (!(is_alpha(raw[i]) || raw[i] == '_')) return false;
    const std::size_t start = i;
    while (i < raw.size() && is_ident_char(raw[i])) ++i;
    longest = std::max(longest, i - start);
    ++segments;
    if (i == raw.size()) break;
    if (raw[i] != '.') return false;
    ++i;
    if (i == raw.size()) return false;
  }
  return segments >= 2 && longest >= 2;
}

}  // namespace crmoji::text
