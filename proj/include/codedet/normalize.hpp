#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "codedet/rng.hpp"

namespace codedet {

// Training-time augmentation probabilities.
struct AugmentConfig {
    double p_comment_strip = 0.10;
    double p_literal_mask = 0.15;
    double p_header_drop = 0.10;
    int header_max_lines = 40;
    std::uint64_t rng_seed = 0;
};

// Deterministic cleanup applied to all data: markdown fence lines removed,
// tabs expanded to 4 spaces, trailing whitespace trimmed, runs of more than
// 2 blank lines compressed. Idempotent.
std::string normalize_code(std::string_view text);

// Removes /* */ spans, //-to-end-of-line outside double-quoted strings
// (quote-parity heuristic per line), and lines whose first non-blank
// character is '#'. Lexical, not parser-based.
std::string strip_comments(std::string_view text);

// Replaces same-line quoted spans with <STR> and standalone numeric tokens
// with <NUM>. Digits inside identifiers are left alone.
std::string mask_literals(std::string_view text);

// Drops the maximal leading run (capped at max_lines) of blank, comment,
// import-like, and docstring-delimiter lines.
std::string drop_header(std::string_view text, int max_lines);

// Applies comment-strip, literal-mask, header-drop, each independently with
// its configured probability, in that order. Always draws three uniforms so
// the stream position is independent of which augmentations fire.
std::string augment(std::string_view text, const AugmentConfig& cfg, Rng& rng);

// Training chunk sampling for long code: whole text when it fits, otherwise
// a chunk_chars-long window starting at the head (p=0.50), a uniformly random
// position (p=0.30), or the end (p=0.20). Positions are code-point based.
std::string sample_training_chunk(std::string_view text, std::size_t chunk_chars, Rng& rng);

}  // namespace codedet
