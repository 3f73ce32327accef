#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace codedet {

struct ChunkConfig {
    std::size_t chunk_chars = 900;
    std::size_t overlap_chars = 120;
    std::size_t max_chunks = 6;
};

struct CharSpan {
    std::size_t begin = 0;  // code point offsets
    std::size_t end = 0;
};

// Overlapping character windows over a text of `length_chars` code points.
// The head and tail are always covered; middle chunk starts are evenly
// spaced by rounded linear interpolation.
struct ChunkPlan {
    ChunkConfig config;
    std::size_t text_chars = 0;
    std::vector<CharSpan> spans;

    nlohmann::json to_json() const;
};

ChunkPlan plan_chunks(std::size_t length_chars, const ChunkConfig& cfg);

// Chunk texts for a plan, sliced on code point boundaries.
std::vector<std::string> extract_chunks(std::string_view text, const ChunkPlan& plan);

// 50/50 blend of a trimmed mean (one min and one max dropped when there are
// 3+ chunks) and a top-2 mean. Probabilities must lie in [0, 1].
double aggregate_chunk_probs(std::span<const double> probs);

// Whitespace/word/punctuation tokenization that is exactly round-trippable:
// gaps[i] precedes tokens[i], gaps.back() trails the text.
struct TokenizedText {
    std::vector<std::string> tokens;
    std::vector<std::string> gaps;  // size == tokens.size() + 1

    std::string reassemble() const;
    // Reassembles tokens [begin, begin+count) with their interior gaps.
    // The gap before the first kept token is included only when
    // `keep_leading_gap` is set.
    std::string reassemble_range(std::size_t begin, std::size_t count,
                                 bool keep_leading_gap) const;
};

TokenizedText tokenize(std::string_view text);

// The literal mid-cut delimiter used by sandwich packing.
inline constexpr std::string_view kMidSnipDelimiter = "/*<MID_SNIP>*/";

// Head tokens + delimiter + tail tokens within a fixed token budget. The
// input is returned unchanged (no delimiter) when it already fits.
struct PackedInput {
    std::size_t head_count = 0;
    std::size_t tail_count = 0;
    double requested_head_fraction = 0.0;
    bool has_delimiter = false;
    std::vector<std::string> delimiter_tokens;
    std::string text;                        // packed text, ready for scoring
    std::vector<std::string> token_sequence; // head ++ delimiter ++ tail

    // Realized h / (h + t).
    double head_fraction() const {
        const std::size_t total = head_count + tail_count;
        return total == 0 ? 0.0 : static_cast<double>(head_count) / static_cast<double>(total);
    }
};

PackedInput sandwich_pack(const TokenizedText& input, std::size_t budget, double head_fraction,
                          std::string_view delimiter = kMidSnipDelimiter);

// Pre-tokenization character cap: keeps the first ceil(cap/2) and last
// floor(cap/2) code points of an over-long text.
std::string cap_text_chars(std::string_view text, std::size_t cap);

// Element-wise arithmetic mean of probability distributions.
std::vector<double> tta_average(std::span<const std::vector<double>> distributions);

}  // namespace codedet
