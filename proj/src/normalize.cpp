#include "codedet/normalize.hpp"

#include <cctype>
#include <vector>

#include "codedet/utf8.hpp"

namespace codedet {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            lines.emplace_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out += '\n';
        out += lines[i];
    }
    return out;
}

std::string_view ltrim(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '-';
}

// A fence line is ``` alone or followed by a single language word.
bool is_fence_line(std::string_view line) {
    std::string_view body = ltrim(line);
    if (body.substr(0, 3) != "```") return false;
    body.remove_prefix(3);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t' || body.back() == '\r')) {
        body.remove_suffix(1);
    }
    for (char c : body) {
        if (!is_word_char(c)) return false;
    }
    return true;
}

void expand_tabs_and_rtrim(std::string& line) {
    std::string out;
    out.reserve(line.size());
    for (char c : line) {
        if (c == '\t') {
            out += "    ";
        } else {
            out += c;
        }
    }
    std::size_t end = out.size();
    while (end > 0 && (out[end - 1] == ' ' || out[end - 1] == '\r')) --end;
    out.resize(end);
    line = std::move(out);
}

bool starts_with_word(std::string_view body, std::string_view word) {
    if (body.substr(0, word.size()) != word) return false;
    if (body.size() == word.size()) return true;
    const char next = body[word.size()];
    return next == ' ' || next == '\t' || next == '(' || next == '"' || next == '<';
}

bool is_droppable_header_line(std::string_view line) {
    std::string_view body = ltrim(line);
    if (body.empty() || body == "\r") return true;
    if (body[0] == '#') return true;  // hash comments and preprocessor includes
    if (body.substr(0, 2) == "//" || body.substr(0, 2) == "/*" || body.substr(0, 2) == "*/") {
        return true;
    }
    if (body[0] == '*') return true;  // continuation of a block license header
    if (body.substr(0, 3) == "\"\"\"" || body.substr(0, 3) == "'''") return true;
    for (std::string_view kw : {"import", "from", "using", "package", "use"}) {
        if (starts_with_word(body, kw)) return true;
    }
    return false;
}

}  // namespace

std::string normalize_code(std::string_view text) {
    std::vector<std::string> lines = split_lines(text);

    std::vector<std::string> kept;
    kept.reserve(lines.size());
    std::size_t blank_run = 0;
    for (std::string& line : lines) {
        if (is_fence_line(line)) continue;
        expand_tabs_and_rtrim(line);
        if (line.empty()) {
            if (blank_run >= 2) continue;
            ++blank_run;
        } else {
            blank_run = 0;
        }
        kept.push_back(std::move(line));
    }
    return join_lines(kept);
}

std::string strip_comments(std::string_view text) {
    // Pass 1: remove /* */ spans (unterminated comments run to the end).
    std::string no_blocks;
    no_blocks.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (i + 1 < text.size() && text[i] == '/' && text[i + 1] == '*') {
            const std::size_t close = text.find("*/", i + 2);
            if (close == std::string_view::npos) break;
            i = close + 2;
            continue;
        }
        no_blocks += text[i++];
    }

    // Pass 2: per line, drop full-line hash comments and trailing //-comments
    // outside double-quoted strings.
    std::vector<std::string> lines = split_lines(no_blocks);
    std::vector<std::string> kept;
    kept.reserve(lines.size());
    for (const std::string& line : lines) {
        std::string_view body = ltrim(line);
        if (!body.empty() && body[0] == '#') continue;

        bool in_string = false;
        std::size_t cut = line.size();
        for (std::size_t j = 0; j < line.size(); ++j) {
            const char c = line[j];
            if (in_string && c == '\\') {
                ++j;
                continue;
            }
            if (c == '"') {
                in_string = !in_string;
            } else if (!in_string && c == '/' && j + 1 < line.size() && line[j + 1] == '/') {
                cut = j;
                break;
            }
        }
        kept.push_back(line.substr(0, cut));
    }
    return join_lines(kept);
}

std::string mask_literals(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];

        if (c == '"' || c == '\'') {
            // Same-line, non-nested quoted span; honor backslash escapes.
            std::size_t j = i + 1;
            bool closed = false;
            while (j < text.size() && text[j] != '\n') {
                if (text[j] == '\\' && j + 1 < text.size()) {
                    j += 2;
                    continue;
                }
                if (text[j] == c) {
                    closed = true;
                    break;
                }
                ++j;
            }
            if (closed) {
                out += "<STR>";
                i = j + 1;
                continue;
            }
            out += c;
            ++i;
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c))) {
            const char prev = (i > 0) ? text[i - 1] : '\0';
            const bool standalone_start =
                i == 0 || !(std::isalnum(static_cast<unsigned char>(prev)) || prev == '_' ||
                            prev == '.');
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j + 1 < text.size() && text[j] == '.' &&
                std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            if (j + 1 < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                    j = k;
                    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                        ++j;
                }
            }
            const char next = (j < text.size()) ? text[j] : '\0';
            const bool standalone_end =
                !(std::isalpha(static_cast<unsigned char>(next)) || next == '_' || next == '.');
            if (standalone_start && standalone_end) {
                out += "<NUM>";
            } else {
                out.append(text.substr(i, j - i));
            }
            i = j;
            continue;
        }

        out += c;
        ++i;
    }
    return out;
}

std::string drop_header(std::string_view text, int max_lines) {
    if (max_lines < 0) max_lines = 0;
    std::vector<std::string> lines = split_lines(text);
    std::size_t run = 0;
    while (run < lines.size() && is_droppable_header_line(lines[run])) ++run;
    const std::size_t removable = std::min(run, static_cast<std::size_t>(max_lines));
    lines.erase(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(removable));
    return join_lines(lines);
}

std::string augment(std::string_view text, const AugmentConfig& cfg, Rng& rng) {
    const double u_strip = rng.next_double();
    const double u_mask = rng.next_double();
    const double u_drop = rng.next_double();

    std::string out(text);
    if (u_strip < cfg.p_comment_strip) out = strip_comments(out);
    if (u_mask < cfg.p_literal_mask) out = mask_literals(out);
    if (u_drop < cfg.p_header_drop) out = drop_header(out, cfg.header_max_lines);
    return out;
}

std::string sample_training_chunk(std::string_view text, std::size_t chunk_chars, Rng& rng) {
    const std::size_t total = utf8::length(text);
    if (total <= chunk_chars) return std::string(text);

    const std::size_t last_start = total - chunk_chars;
    const double u = rng.next_double();
    std::size_t start = 0;
    if (u < 0.50) {
        start = 0;
    } else if (u < 0.80) {
        start = rng.next_below(last_start + 1);
    } else {
        start = last_start;
    }
    return std::string(utf8::slice(text, start, chunk_chars));
}

}  // namespace codedet
