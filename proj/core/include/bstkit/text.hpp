#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the parsers.
namespace bstkit::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view trim(std::string_view s);

// Trim and collapse every whitespace run to one space. Idempotent.
std::string collapse_whitespace(std::string_view s);

bool is_blank(std::string_view s);

std::string to_lower(std::string_view s);

// Splits on LF, dropping a trailing CR from each line. A final empty line
// after a trailing LF is not reported.
std::vector<std::string> split_lines(std::string_view s);

// Byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

// 1-based line number of byte offset `pos`.
int line_of(std::string_view s, std::size_t pos);

}  // namespace bstkit::text
