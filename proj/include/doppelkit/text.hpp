#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

// Minimal UTF-8 handling. Letter and case classification covers Latin,
// Greek and Cyrillic; everything else outside the punctuation and symbol
// blocks is treated as a letter without case.
namespace doppelkit::text {

struct Decoded {
  char32_t code_point;
  std::size_t length;  // bytes consumed
};

// Decodes the code point starting at `pos`; nullopt on malformed input.
std::optional<Decoded> decode(std::string_view s, std::size_t pos);

void append_utf8(std::string& out, char32_t cp);

bool is_space(char32_t cp);
bool is_digit(char32_t cp);
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_apostrophe(char32_t cp);
char32_t to_lower(char32_t cp);

std::string lowercase(std::string_view s);

// True when every code point is a letter.
bool is_alphabetic(std::string_view s);

}  // namespace doppelkit::text
