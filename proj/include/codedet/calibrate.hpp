#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "codedet/corpus.hpp"
#include "codedet/features.hpp"
#include "codedet/langid.hpp"
#include "codedet/linear.hpp"

namespace codedet {

// The 99 quantile candidates (1%..99%, linear interpolation) of a score
// distribution, in ascending order. Exposed so an exhaustive oracle can
// enumerate the exact same grid.
std::vector<double> quantile_candidates(std::span<const double> scores);

// Macro-F1-maximizing threshold for the rule (score >= tau -> class 1) over
// the quantile candidate grid; ties resolve to the smallest candidate.
// Requires both labels present.
double search_threshold(std::span<const double> scores, std::span<const int> labels);

// Equal-weight blend; both inputs must be in (0, 1).
double blend(double tau_oof, double tau_diff);

// Global blended threshold plus per-language overrides. Languages without
// an entry (including Unknown) fall back to tau_global.
struct ThresholdSet {
    double tau_oof = 0.5;
    double tau_diff = 0.5;
    double tau_global = 0.5;
    std::map<Language, double> per_language;

    double threshold_for(Language lang) const;

    nlohmann::json to_json() const;
    static ThresholdSet from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static ThresholdSet load(const std::string& path);
};

// Builds a ThresholdSet whose tau_global is exactly the equal-weight blend.
ThresholdSet make_threshold_set(double tau_oof, double tau_diff,
                                std::map<Language, double> per_language = {});

// score >= threshold -> 1, with the per-language override when present.
int apply_threshold(const ThresholdSet& thresholds, double score, Language language);

struct ScoredExample {
    double score = 0.0;
    int label = 0;
    Language language = Language::Unknown;
};

// Per-language thresholds over groups with at least `min_group` samples and
// both labels; smaller, single-class, and Unknown groups are omitted.
std::map<Language, double> per_language_thresholds(std::span<const ScoredExample> examples,
                                                   std::size_t min_group = 20);

// Baseline used for the difficult-set cross-validation.
struct BaselineConfig {
    VocabularyCaps vocab;
    TrainConfig train;
};

struct DifficultSet {
    std::vector<CodeSample> samples;
    std::size_t misclassified_total = 0;
    bool short_of_requested = false;
};

// Runs stratified k-fold CV with the TF-IDF + logistic regression baseline
// and samples `size` of the out-of-fold misclassified examples (all of them
// when fewer). Deterministic given the seed.
DifficultSet build_difficult_set(std::span<const CodeSample> samples,
                                 const BaselineConfig& baseline, int k_folds, std::size_t size,
                                 std::uint64_t seed);

}  // namespace codedet
