#include "codedet/chunking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "codedet/utf8.hpp"

namespace codedet {

using nlohmann::json;

ChunkPlan plan_chunks(std::size_t length_chars, const ChunkConfig& cfg) {
    if (cfg.chunk_chars == 0 || cfg.chunk_chars <= cfg.overlap_chars || cfg.max_chunks < 1) {
        throw std::invalid_argument(
            "plan_chunks: need chunk_chars > overlap_chars >= 0 and max_chunks >= 1");
    }

    ChunkPlan plan;
    plan.config = cfg;
    plan.text_chars = length_chars;

    if (length_chars <= cfg.chunk_chars) {
        plan.spans.push_back({0, length_chars});
        return plan;
    }

    const double stride = static_cast<double>(cfg.chunk_chars - cfg.overlap_chars);
    const double covered = static_cast<double>(length_chars - cfg.overlap_chars);
    const std::size_t natural = static_cast<std::size_t>(std::ceil(covered / stride));
    const std::size_t n = std::min(cfg.max_chunks, std::max<std::size_t>(natural, 2));

    const std::size_t last_start = length_chars - cfg.chunk_chars;
    plan.spans.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pos = static_cast<double>(i) * static_cast<double>(last_start) /
                           static_cast<double>(n - 1);
        const auto start = static_cast<std::size_t>(std::llround(pos));
        plan.spans.push_back({start, start + cfg.chunk_chars});
    }
    return plan;
}

std::vector<std::string> extract_chunks(std::string_view text, const ChunkPlan& plan) {
    std::vector<std::string> chunks;
    chunks.reserve(plan.spans.size());
    for (const CharSpan& span : plan.spans) {
        chunks.emplace_back(utf8::slice(text, span.begin, span.end - span.begin));
    }
    return chunks;
}

json ChunkPlan::to_json() const {
    json j;
    j["chunk_chars"] = config.chunk_chars;
    j["overlap_chars"] = config.overlap_chars;
    j["max_chunks"] = config.max_chunks;
    j["text_chars"] = text_chars;
    j["spans"] = json::array();
    for (const CharSpan& span : spans) {
        j["spans"].push_back(json::array({span.begin, span.end}));
    }
    return j;
}

double aggregate_chunk_probs(std::span<const double> probs) {
    if (probs.empty()) throw std::invalid_argument("aggregate_chunk_probs: empty input");
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("aggregate_chunk_probs: probability outside [0, 1]");
        }
    }

    double sum = 0.0;
    double min = probs[0];
    double max = probs[0];
    double top1 = 0.0;
    double top2 = 0.0;  // second largest
    for (double p : probs) {
        sum += p;
        min = std::min(min, p);
        max = std::max(max, p);
        if (p > top1) {
            top2 = top1;
            top1 = p;
        } else if (p > top2) {
            top2 = p;
        }
    }

    const std::size_t n = probs.size();
    const double trimmed =
        n >= 3 ? (sum - min - max) / static_cast<double>(n - 2) : sum / static_cast<double>(n);
    const double top2_mean = n >= 2 ? 0.5 * (top1 + top2) : top1;
    return 0.5 * trimmed + 0.5 * top2_mean;
}

namespace {

enum class CharClass { Whitespace, Word, Punct };

CharClass classify(unsigned char c) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        return CharClass::Whitespace;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
        c == '_' || c >= 0x80) {
        return CharClass::Word;
    }
    return CharClass::Punct;
}

}  // namespace

TokenizedText tokenize(std::string_view text) {
    TokenizedText out;
    std::string gap;
    std::size_t i = 0;
    while (i < text.size()) {
        const CharClass cls = classify(static_cast<unsigned char>(text[i]));
        std::size_t j = i + 1;
        while (j < text.size() && classify(static_cast<unsigned char>(text[j])) == cls) ++j;
        if (cls == CharClass::Whitespace) {
            gap.append(text.substr(i, j - i));
        } else {
            out.gaps.push_back(std::move(gap));
            gap.clear();
            out.tokens.emplace_back(text.substr(i, j - i));
        }
        i = j;
    }
    out.gaps.push_back(std::move(gap));
    return out;
}

std::string TokenizedText::reassemble() const {
    return reassemble_range(0, tokens.size(), true) + gaps.back();
}

std::string TokenizedText::reassemble_range(std::size_t begin, std::size_t count,
                                            bool keep_leading_gap) const {
    std::string out;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = begin + k;
        if (k > 0 || keep_leading_gap) out += gaps[i];
        out += tokens[i];
    }
    return out;
}

PackedInput sandwich_pack(const TokenizedText& input, std::size_t budget, double head_fraction,
                          std::string_view delimiter) {
    const TokenizedText delim_tok = tokenize(delimiter);
    const std::size_t delim_len = delim_tok.tokens.size();
    if (budget <= delim_len + 2) {
        throw std::invalid_argument("sandwich_pack: budget must exceed delimiter length + 2");
    }
    if (!(head_fraction > 0.0 && head_fraction < 1.0)) {
        throw std::invalid_argument("sandwich_pack: head_fraction must be in (0, 1)");
    }

    PackedInput out;
    out.requested_head_fraction = head_fraction;
    out.delimiter_tokens = delim_tok.tokens;

    const std::size_t total = input.tokens.size();
    if (total <= budget) {
        out.head_count = total;
        out.tail_count = 0;
        out.has_delimiter = false;
        out.text = input.reassemble();
        out.token_sequence = input.tokens;
        return out;
    }

    const std::size_t usable = budget - delim_len;
    auto head = static_cast<std::size_t>(
        std::llround(head_fraction * static_cast<double>(usable)));
    head = std::min(head, usable);
    const std::size_t tail = usable - head;

    out.head_count = head;
    out.tail_count = tail;
    out.has_delimiter = true;
    out.text = input.reassemble_range(0, head, true);
    out.text += delimiter;
    out.text += input.reassemble_range(total - tail, tail, false);
    out.text += input.gaps.back();

    out.token_sequence.reserve(head + delim_len + tail);
    out.token_sequence.insert(out.token_sequence.end(), input.tokens.begin(),
                              input.tokens.begin() + static_cast<std::ptrdiff_t>(head));
    out.token_sequence.insert(out.token_sequence.end(), delim_tok.tokens.begin(),
                              delim_tok.tokens.end());
    out.token_sequence.insert(out.token_sequence.end(),
                              input.tokens.end() - static_cast<std::ptrdiff_t>(tail),
                              input.tokens.end());
    return out;
}

std::string cap_text_chars(std::string_view text, std::size_t cap) {
    const std::size_t total = utf8::length(text);
    if (total <= cap) return std::string(text);
    const std::size_t head = (cap + 1) / 2;
    const std::size_t tail = cap / 2;
    std::string out(utf8::truncate(text, head));
    out += utf8::suffix(text, tail);
    return out;
}

std::vector<double> tta_average(std::span<const std::vector<double>> distributions) {
    if (distributions.empty()) throw std::invalid_argument("tta_average: empty input");
    const std::size_t k = distributions.front().size();
    for (const std::vector<double>& dist : distributions) {
        if (dist.size() != k) throw std::invalid_argument("tta_average: length mismatch");
        double sum = 0.0;
        for (double p : dist) sum += p;
        if (std::abs(sum - 1.0) > 1e-6) {
            throw std::invalid_argument("tta_average: distribution does not sum to 1");
        }
    }
    std::vector<double> mean(k, 0.0);
    for (const std::vector<double>& dist : distributions) {
        for (std::size_t i = 0; i < k; ++i) mean[i] += dist[i];
    }
    const double inv = 1.0 / static_cast<double>(distributions.size());
    for (double& v : mean) v *= inv;
    return mean;
}

}  // namespace codedet
