#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "codedet/corpus.hpp"
#include "codedet/utf8.hpp"

namespace codedet {

struct VocabularyCaps {
    std::size_t max_features = 100000;
    std::size_t truncate_chars = 10000;
    std::size_t n_min = 2;
    std::size_t n_max = 5;
};

// Fitted character-n-gram dictionary. Indices are dense in [0, size) and
// assigned in lexicographic term order.
struct Vocabulary {
    VocabularyCaps caps;
    std::uint64_t fitted_docs = 0;
    std::vector<std::string> terms;
    std::vector<std::uint32_t> doc_freq;
    std::unordered_map<std::string, std::uint32_t> index;

    std::size_t size() const { return terms.size(); }

    // Stable fingerprint of the fitted state; models refuse to score
    // features from a vocabulary with a different hash.
    std::uint64_t content_hash() const;

    nlohmann::json to_json() const;
    static Vocabulary from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);
};

// L2-normalized TF-IDF vector; indices strictly increasing.
struct SparseVector {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    std::uint32_t dim = 0;

    std::size_t nnz() const { return indices.size(); }
    double l2_norm() const;
};

// Character n-grams within word boundaries: the text splits on whitespace,
// each word is padded with one space per side, and every n-gram of length
// n_min..n_max is emitted per padded word. N-grams never span words.
// Positions are code points, so multi-byte characters count as one.
template <typename Emit>
void char_wb_ngrams(std::string_view text, std::size_t n_min, std::size_t n_max, Emit&& emit) {
    if (n_min < 1 || n_min > n_max) {
        throw std::invalid_argument("char_wb_ngrams: need 1 <= n_min <= n_max");
    }
    std::string padded;
    std::vector<std::size_t> offs;
    std::size_t word_start = std::string_view::npos;

    auto flush_word = [&](std::size_t begin, std::size_t end) {
        padded.assign(1, ' ');
        padded.append(text.substr(begin, end - begin));
        padded += ' ';
        offs = utf8::offsets(padded);
        const std::size_t cp_len = offs.size() - 1;
        for (std::size_t n = n_min; n <= n_max; ++n) {
            if (n > cp_len) break;
            for (std::size_t start = 0; start + n <= cp_len; ++start) {
                emit(std::string_view(padded).substr(offs[start], offs[start + n] - offs[start]));
            }
        }
    };

    for (std::size_t i = 0; i <= text.size(); ++i) {
        const bool ws = i == text.size() || std::isspace(static_cast<unsigned char>(text[i]));
        if (!ws && word_start == std::string_view::npos) {
            word_start = i;
        } else if (ws && word_start != std::string_view::npos) {
            flush_word(word_start, i);
            word_start = std::string_view::npos;
        }
    }
}

// Convenience counting form used by tests and the fitting path.
std::map<std::string, std::uint32_t> char_wb_ngram_counts(std::string_view text,
                                                          std::size_t n_min,
                                                          std::size_t n_max);

// Ranks terms by corpus frequency (ties lexicographic) and keeps the top
// max_features. Each text is truncated to caps.truncate_chars code points
// before extraction. Throws on an empty corpus.
Vocabulary fit_vocabulary(std::span<const CodeSample> samples, const VocabularyCaps& caps = {});

// Sublinear TF (1 + ln tf), smoothed IDF (ln((1+N)/(1+df)) + 1), L2
// normalization. Out-of-vocabulary terms are dropped.
SparseVector transform(std::string_view text, const Vocabulary& vocab);

}  // namespace codedet
