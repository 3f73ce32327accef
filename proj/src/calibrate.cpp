#include "codedet/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "codedet/metrics.hpp"
#include "codedet/rng.hpp"

namespace codedet {

using nlohmann::json;

std::vector<double> quantile_candidates(std::span<const double> scores) {
    if (scores.empty()) throw std::invalid_argument("quantile_candidates: empty scores");
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> candidates;
    candidates.reserve(99);
    const std::size_t n = sorted.size();
    for (int k = 1; k <= 99; ++k) {
        const double h = (static_cast<double>(k) / 100.0) * static_cast<double>(n - 1);
        const auto lo = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo);
        const double value = (lo + 1 < n) ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
                                          : sorted[lo];
        candidates.push_back(value);
    }
    return candidates;
}

double search_threshold(std::span<const double> scores, std::span<const int> labels) {
    if (scores.empty() || scores.size() != labels.size()) {
        throw std::invalid_argument("search_threshold: empty or mismatched inputs");
    }
    bool has0 = false, has1 = false;
    for (int label : labels) {
        if (label == 0) has0 = true;
        else if (label == 1) has1 = true;
        else throw std::invalid_argument("search_threshold: labels must be binary");
    }
    if (!has0 || !has1) {
        throw std::invalid_argument("search_threshold: both labels must be present");
    }

    const std::vector<double> candidates = quantile_candidates(scores);
    std::vector<int> preds(scores.size());
    double best_tau = candidates.front();
    double best_f1 = -1.0;
    for (const double tau : candidates) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            preds[i] = scores[i] >= tau ? 1 : 0;
        }
        const double f1 = macro_f1(preds, labels, 2);
        if (f1 > best_f1) {
            best_f1 = f1;
            best_tau = tau;
        }
    }
    return best_tau;
}

double blend(double tau_oof, double tau_diff) {
    if (!(tau_oof > 0.0 && tau_oof < 1.0) || !(tau_diff > 0.0 && tau_diff < 1.0)) {
        throw std::invalid_argument("blend: thresholds must be in (0, 1)");
    }
    return 0.5 * tau_oof + 0.5 * tau_diff;
}

double ThresholdSet::threshold_for(Language lang) const {
    const auto it = per_language.find(lang);
    return it != per_language.end() ? it->second : tau_global;
}

ThresholdSet make_threshold_set(double tau_oof, double tau_diff,
                                std::map<Language, double> per_language) {
    ThresholdSet set;
    set.tau_oof = tau_oof;
    set.tau_diff = tau_diff;
    set.tau_global = blend(tau_oof, tau_diff);
    set.per_language = std::move(per_language);
    for (const auto& [lang, tau] : set.per_language) {
        if (!(tau > 0.0 && tau < 1.0)) {
            throw std::invalid_argument("make_threshold_set: per-language threshold outside (0, 1)");
        }
        if (lang == Language::Unknown) {
            throw std::invalid_argument("make_threshold_set: Unknown cannot carry a threshold");
        }
    }
    return set;
}

int apply_threshold(const ThresholdSet& thresholds, double score, Language language) {
    if (!(score >= 0.0 && score <= 1.0)) {
        throw std::invalid_argument("apply_threshold: score outside [0, 1]");
    }
    return score >= thresholds.threshold_for(language) ? 1 : 0;
}

json ThresholdSet::to_json() const {
    json j;
    j["tau_oof"] = tau_oof;
    j["tau_diff"] = tau_diff;
    j["tau_global"] = tau_global;
    j["per_language"] = json::object();
    for (const auto& [lang, tau] : per_language) {
        j["per_language"][std::string(to_string(lang))] = tau;
    }
    return j;
}

ThresholdSet ThresholdSet::from_json(const json& j) {
    ThresholdSet set;
    set.tau_oof = j.at("tau_oof").get<double>();
    set.tau_diff = j.at("tau_diff").get<double>();
    set.tau_global = j.at("tau_global").get<double>();
    if (j.contains("per_language")) {
        for (const auto& [key, value] : j.at("per_language").items()) {
            const Language lang = language_from_string(key);
            if (lang == Language::Unknown) {
                throw std::runtime_error("threshold file has unknown language tag '" + key + "'");
            }
            set.per_language[lang] = value.get<double>();
        }
    }
    return set;
}

void ThresholdSet::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write threshold file: " + path);
    out << to_json().dump(2) << '\n';
}

ThresholdSet ThresholdSet::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open threshold file: " + path);
    json j;
    in >> j;
    return from_json(j);
}

std::map<Language, double> per_language_thresholds(std::span<const ScoredExample> examples,
                                                   std::size_t min_group) {
    std::map<Language, std::pair<std::vector<double>, std::vector<int>>> groups;
    for (const ScoredExample& example : examples) {
        if (example.language == Language::Unknown) continue;
        auto& [scores, labels] = groups[example.language];
        scores.push_back(example.score);
        labels.push_back(example.label);
    }

    std::map<Language, double> out;
    for (const auto& [lang, group] : groups) {
        const auto& [scores, labels] = group;
        if (scores.size() < min_group) continue;
        const bool has0 = std::find(labels.begin(), labels.end(), 0) != labels.end();
        const bool has1 = std::find(labels.begin(), labels.end(), 1) != labels.end();
        if (!has0 || !has1) continue;
        out[lang] = search_threshold(scores, labels);
    }
    return out;
}

DifficultSet build_difficult_set(std::span<const CodeSample> samples,
                                 const BaselineConfig& baseline, int k_folds, std::size_t size,
                                 std::uint64_t seed) {
    if (k_folds < 2) throw std::invalid_argument("build_difficult_set: need k_folds >= 2");
    if (samples.size() < size) {
        throw std::invalid_argument("build_difficult_set: fewer samples than requested size");
    }

    std::vector<std::size_t> class0, class1;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!samples[i].label) {
            throw std::invalid_argument("build_difficult_set: sample '" + samples[i].id +
                                        "' has no label");
        }
        (*samples[i].label == 0 ? class0 : class1).push_back(i);
    }
    if (class0.empty() || class1.empty()) {
        throw std::invalid_argument("build_difficult_set: both classes must be present");
    }

    // Stratified fold assignment: shuffle within class, deal round-robin.
    std::vector<int> fold_of(samples.size(), 0);
    Rng fold_rng(Rng::derive(seed, "difficult-folds"));
    for (std::vector<std::size_t>* cls : {&class0, &class1}) {
        fold_rng.shuffle(*cls);
        for (std::size_t j = 0; j < cls->size(); ++j) {
            fold_of[(*cls)[j]] = static_cast<int>(j % static_cast<std::size_t>(k_folds));
        }
    }

    std::vector<std::size_t> misclassified;
    for (int fold = 0; fold < k_folds; ++fold) {
        std::vector<CodeSample> train_samples;
        std::vector<int> train_labels;
        std::vector<std::size_t> holdout;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (fold_of[i] == fold) {
                holdout.push_back(i);
            } else {
                train_samples.push_back(samples[i]);
                train_labels.push_back(*samples[i].label);
            }
        }
        if (holdout.empty()) continue;

        const Vocabulary vocab = fit_vocabulary(train_samples, baseline.vocab);
        std::vector<SparseVector> train_features;
        train_features.reserve(train_samples.size());
        for (const CodeSample& sample : train_samples) {
            train_features.push_back(transform(sample.text, vocab));
        }
        std::vector<std::uint64_t> counts(2, 0);
        for (int label : train_labels) ++counts[static_cast<std::size_t>(label)];
        const ClassWeights cw = balanced_weights(counts);
        const LinearModel model =
            train(train_features, train_labels, cw, baseline.train, 2, vocab.content_hash());

        for (const std::size_t i : holdout) {
            const SparseVector sv = transform(samples[i].text, vocab);
            const double p_ai = predict_proba(model, sv)[1];
            const int pred = p_ai >= 0.5 ? 1 : 0;
            if (pred != *samples[i].label) misclassified.push_back(i);
        }
    }

    DifficultSet out;
    out.misclassified_total = misclassified.size();
    std::sort(misclassified.begin(), misclassified.end());
    if (misclassified.size() > size) {
        Rng pick_rng(Rng::derive(seed, "difficult-sample"));
        pick_rng.shuffle(misclassified);
        misclassified.resize(size);
        std::sort(misclassified.begin(), misclassified.end());
    } else {
        out.short_of_requested = misclassified.size() < size;
    }
    out.samples.reserve(misclassified.size());
    for (const std::size_t i : misclassified) out.samples.push_back(samples[i]);
    return out;
}

}  // namespace codedet
