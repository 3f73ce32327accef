#include "codedet/utf8.hpp"

namespace codedet::utf8 {

namespace {

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

// Byte offset of the cp_index-th code point; text.size() when past the end.
std::size_t byte_offset(std::string_view text, std::size_t cp_index) {
    std::size_t seen = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_continuation(static_cast<unsigned char>(text[i]))) {
            if (seen == cp_index) return i;
            ++seen;
        }
    }
    return text.size();
}

}  // namespace

std::size_t length(std::string_view text) {
    std::size_t n = 0;
    for (char c : text) {
        if (!is_continuation(static_cast<unsigned char>(c))) ++n;
    }
    return n;
}

std::vector<std::size_t> offsets(std::string_view text) {
    std::vector<std::size_t> out;
    out.reserve(text.size() + 1);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_continuation(static_cast<unsigned char>(text[i]))) out.push_back(i);
    }
    out.push_back(text.size());
    return out;
}

std::string_view slice(std::string_view text, std::size_t cp_start, std::size_t cp_count) {
    const std::size_t begin = byte_offset(text, cp_start);
    const std::size_t end = byte_offset(text, cp_start + cp_count);
    return text.substr(begin, end - begin);
}

std::string_view truncate(std::string_view text, std::size_t cp_count) {
    if (cp_count >= text.size()) return text;  // cp count never exceeds byte count
    return text.substr(0, byte_offset(text, cp_count));
}

std::string_view suffix(std::string_view text, std::size_t cp_count) {
    const std::size_t total = length(text);
    if (cp_count >= total) return text;
    return text.substr(byte_offset(text, total - cp_count));
}

}  // namespace codedet::utf8
