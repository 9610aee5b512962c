#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace crmoji::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed, always >= 1
};

/// Decodes one scalar value at `pos`. Malformed or truncated input yields
/// U+FFFD with length 1 so callers always make progress.
Decoded decode(std::string_view text, std::size_t pos) noexcept;

void append(std::string& out, char32_t cp);
std::string encode(char32_t cp);

bool is_valid(std::string_view text) noexcept;

std::size_t count_codepoints(std::string_view text) noexcept;

}  // namespace crmoji::utf8
