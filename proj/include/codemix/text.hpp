#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small byte-level string helpers shared by the corpus, preprocessing and
// vectorization code. Only ASCII is case-folded or treated as whitespace;
// bytes >= 0x80 pass through untouched.
namespace codemix {

constexpr bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}
constexpr bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
constexpr bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
constexpr bool is_ascii_alpha(char c) { return is_ascii_lower(c) || is_ascii_upper(c); }
constexpr bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
constexpr bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }
constexpr bool is_non_ascii(char c) { return static_cast<unsigned char>(c) >= 0x80; }
constexpr char to_ascii_lower(char c) { return is_ascii_upper(c) ? c - 'A' + 'a' : c; }

std::string ascii_lower(std::string_view s);

/// Views into `s` for each maximal run of non-whitespace bytes.
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Whitespace runs collapsed to one space, no leading or trailing space.
std::string normalize_whitespace(std::string_view s);

/// Splits `s` into UTF-8 code units: a lead byte plus its continuation
/// bytes. Malformed sequences degrade to one unit per byte.
std::vector<std::string_view> utf8_units(std::string_view s);

}  // namespace codemix
