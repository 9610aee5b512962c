#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crmoji::text {

std::string ascii_lower(std::string_view s);

struct Word {
  std::string raw;    // whitespace-delimited chunk as written
  std::string lower;  // edge punctuation trimmed, ASCII-lowercased
};

/// Splits on ASCII whitespace, trims ASCII punctuation from both ends of each
/// chunk and lowercases. Curly apostrophes fold to '. Chunks that trim to
/// nothing are dropped.
std::vector<Word> split_words(std::string_view text);

/// Just the lowercased forms of split_words.
std::vector<std::string> word_tokens(std::string_view text);

struct Sentence {
  std::string body;  // trimmed
  char terminator;   // '.', '!', '?', '\n', or '\0' at end of text
};

/// Splits on . ! ? and newline; empty pieces are dropped.
std::vector<Sentence> split_sentences(std::string_view text);

/// Vowel-group syllable estimate, at least 1.
int count_syllables(std::string_view word);

/// camelCase, snake_case, call suffix `()` or a dotted path.
bool looks_like_code(std::string_view raw);

}  // namespace crmoji::text
