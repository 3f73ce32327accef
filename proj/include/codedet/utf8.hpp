#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace codedet::utf8 {

// Number of Unicode scalar values in a UTF-8 string. Counts lead bytes, so
// malformed sequences degrade gracefully instead of throwing.
std::size_t length(std::string_view text);

// Byte offset of each code point start, plus a trailing entry == text.size().
std::vector<std::size_t> offsets(std::string_view text);

// Substring covering code points [cp_start, cp_start + cp_count).
std::string_view slice(std::string_view text, std::size_t cp_start, std::size_t cp_count);

// First `cp_count` code points.
std::string_view truncate(std::string_view text, std::size_t cp_count);

// Last `cp_count` code points.
std::string_view suffix(std::string_view text, std::size_t cp_count);

}  // namespace codedet::utf8
