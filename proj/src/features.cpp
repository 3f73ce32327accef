#include "codedet/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "codedet/kernels.hpp"

namespace codedet {

using nlohmann::json;

std::map<std::string, std::uint32_t> char_wb_ngram_counts(std::string_view text,
                                                          std::size_t n_min,
                                                          std::size_t n_max) {
    std::map<std::string, std::uint32_t> counts;
    char_wb_ngrams(text, n_min, n_max,
                   [&](std::string_view term) { ++counts[std::string(term)]; });
    return counts;
}

double SparseVector::l2_norm() const {
    return std::sqrt(kernels::sum_squares(values.data(), values.size()));
}

Vocabulary fit_vocabulary(std::span<const CodeSample> samples, const VocabularyCaps& caps) {
    if (samples.empty()) throw std::invalid_argument("fit_vocabulary: empty corpus");

    struct TermStats {
        std::uint64_t corpus_freq = 0;
        std::uint32_t doc_freq = 0;
    };
    std::unordered_map<std::string, TermStats> stats;
    std::unordered_map<std::string, std::uint32_t> doc_counts;

    for (const CodeSample& sample : samples) {
        doc_counts.clear();
        const std::string_view text = utf8::truncate(sample.text, caps.truncate_chars);
        char_wb_ngrams(text, caps.n_min, caps.n_max,
                       [&](std::string_view term) { ++doc_counts[std::string(term)]; });
        for (const auto& [term, count] : doc_counts) {
            TermStats& entry = stats[term];
            entry.corpus_freq += count;
            entry.doc_freq += 1;
        }
    }

    struct Ranked {
        const std::string* term;
        std::uint64_t corpus_freq;
        std::uint32_t doc_freq;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(stats.size());
    for (const auto& [term, entry] : stats) {
        ranked.push_back({&term, entry.corpus_freq, entry.doc_freq});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.corpus_freq != b.corpus_freq) return a.corpus_freq > b.corpus_freq;
        return *a.term < *b.term;
    });
    if (ranked.size() > caps.max_features) ranked.resize(caps.max_features);

    // Indices in lexicographic order so the fitted file is independent of
    // counting order.
    std::sort(ranked.begin(), ranked.end(),
              [](const Ranked& a, const Ranked& b) { return *a.term < *b.term; });

    Vocabulary vocab;
    vocab.caps = caps;
    vocab.fitted_docs = samples.size();
    vocab.terms.reserve(ranked.size());
    vocab.doc_freq.reserve(ranked.size());
    vocab.index.reserve(ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        vocab.terms.push_back(*ranked[i].term);
        vocab.doc_freq.push_back(ranked[i].doc_freq);
        vocab.index.emplace(vocab.terms.back(), static_cast<std::uint32_t>(i));
    }
    return vocab;
}

SparseVector transform(std::string_view text, const Vocabulary& vocab) {
    SparseVector out;
    out.dim = static_cast<std::uint32_t>(vocab.size());

    std::unordered_map<std::uint32_t, std::uint32_t> tf;
    const std::string_view truncated = utf8::truncate(text, vocab.caps.truncate_chars);
    std::string key;
    char_wb_ngrams(truncated, vocab.caps.n_min, vocab.caps.n_max, [&](std::string_view term) {
        key.assign(term);
        const auto it = vocab.index.find(key);
        if (it != vocab.index.end()) ++tf[it->second];
    });
    if (tf.empty()) return out;

    out.indices.reserve(tf.size());
    for (const auto& [idx, count] : tf) out.indices.push_back(idx);
    std::sort(out.indices.begin(), out.indices.end());

    const double n_docs = static_cast<double>(vocab.fitted_docs);
    out.values.reserve(out.indices.size());
    for (const std::uint32_t idx : out.indices) {
        const double term_freq = static_cast<double>(tf.at(idx));
        const double sublinear_tf = 1.0 + std::log(term_freq);
        const double idf =
            std::log((1.0 + n_docs) / (1.0 + static_cast<double>(vocab.doc_freq[idx]))) + 1.0;
        out.values.push_back(sublinear_tf * idf);
    }

    const double norm = std::sqrt(kernels::sum_squares(out.values.data(), out.values.size()));
    if (norm > 0.0) {
        kernels::scale(out.values.data(), 1.0 / norm, out.values.size());
    }
    return out;
}

std::uint64_t Vocabulary::content_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix_bytes = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    auto mix_u64 = [&](std::uint64_t v) { mix_bytes(&v, sizeof(v)); };

    mix_bytes("codedet-vocab-v1", 16);
    mix_u64(caps.max_features);
    mix_u64(caps.truncate_chars);
    mix_u64(caps.n_min);
    mix_u64(caps.n_max);
    mix_u64(fitted_docs);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        mix_bytes(terms[i].data(), terms[i].size());
        mix_bytes("\0", 1);
        mix_u64(doc_freq[i]);
    }
    return h;
}

json Vocabulary::to_json() const {
    json j;
    j["format"] = "codedet-vocab";
    j["version"] = 1;
    j["max_features"] = caps.max_features;
    j["truncate_chars"] = caps.truncate_chars;
    j["n_min"] = caps.n_min;
    j["n_max"] = caps.n_max;
    j["fitted_docs"] = fitted_docs;
    json term_list = json::array();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        term_list.push_back(json::array({terms[i], doc_freq[i]}));
    }
    j["terms"] = std::move(term_list);
    return j;
}

Vocabulary Vocabulary::from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "codedet-vocab" || j.value("version", 0) != 1) {
        throw std::runtime_error("not a codedet vocabulary file");
    }
    Vocabulary vocab;
    vocab.caps.max_features = j.at("max_features").get<std::size_t>();
    vocab.caps.truncate_chars = j.at("truncate_chars").get<std::size_t>();
    vocab.caps.n_min = j.at("n_min").get<std::size_t>();
    vocab.caps.n_max = j.at("n_max").get<std::size_t>();
    vocab.fitted_docs = j.at("fitted_docs").get<std::uint64_t>();
    for (const json& entry : j.at("terms")) {
        vocab.terms.push_back(entry.at(0).get<std::string>());
        vocab.doc_freq.push_back(entry.at(1).get<std::uint32_t>());
        vocab.index.emplace(vocab.terms.back(),
                            static_cast<std::uint32_t>(vocab.terms.size() - 1));
    }
    return vocab;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
    out << to_json().dump() << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
    json j;
    in >> j;
    return from_json(j);
}

}  // namespace codedet
