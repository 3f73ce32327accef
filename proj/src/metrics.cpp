#include "codedet/metrics.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace codedet {

using nlohmann::json;

namespace {

void check_labels(std::span<const int> preds, std::span<const int> golds,
                  std::size_t num_classes) {
    if (preds.size() != golds.size()) {
        throw std::invalid_argument("metrics: preds/golds length mismatch");
    }
    if (preds.empty()) throw std::invalid_argument("metrics: empty input");
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] < 0 || static_cast<std::size_t>(preds[i]) >= num_classes ||
            golds[i] < 0 || static_cast<std::size_t>(golds[i]) >= num_classes) {
            throw std::invalid_argument("metrics: label outside [0, num_classes)");
        }
    }
}

}  // namespace

double macro_f1(std::span<const int> preds, std::span<const int> golds,
                std::size_t num_classes) {
    check_labels(preds, golds, num_classes);

    std::vector<std::uint64_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
    std::vector<bool> present(num_classes, false);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto p = static_cast<std::size_t>(preds[i]);
        const auto g = static_cast<std::size_t>(golds[i]);
        present[p] = present[g] = true;
        if (p == g) {
            ++tp[g];
        } else {
            ++fp[p];
            ++fn[g];
        }
    }

    double sum = 0.0;
    std::size_t classes = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        if (!present[c]) continue;
        ++classes;
        const double denom_p = static_cast<double>(tp[c] + fp[c]);
        const double denom_r = static_cast<double>(tp[c] + fn[c]);
        const double precision = denom_p > 0 ? static_cast<double>(tp[c]) / denom_p : 0.0;
        const double recall = denom_r > 0 ? static_cast<double>(tp[c]) / denom_r : 0.0;
        sum += (precision + recall) > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    return sum / static_cast<double>(classes);
}

EvalReport eval_report(std::span<const int> preds, std::span<const int> golds,
                       std::span<const std::string> languages, std::size_t num_classes) {
    check_labels(preds, golds, num_classes);
    if (!languages.empty() && languages.size() != preds.size()) {
        throw std::invalid_argument("eval_report: languages length mismatch");
    }

    EvalReport report;
    report.confusion.assign(num_classes, std::vector<std::uint64_t>(num_classes, 0));
    for (std::size_t i = 0; i < preds.size(); ++i) {
        ++report.confusion[static_cast<std::size_t>(golds[i])]
                          [static_cast<std::size_t>(preds[i])];
    }

    report.per_class.resize(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::uint64_t tp = report.confusion[c][c];
        std::uint64_t support = 0, predicted = 0;
        for (std::size_t k = 0; k < num_classes; ++k) {
            support += report.confusion[c][k];
            predicted += report.confusion[k][c];
        }
        ClassScore& score = report.per_class[c];
        score.support = support;
        score.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        score.recall = support > 0 ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
        score.f1 = (score.precision + score.recall) > 0
                       ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                       : 0.0;
    }

    report.macro_f1 = macro_f1(preds, golds, num_classes);

    if (!languages.empty()) {
        std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> counts;  // errors, total
        for (std::size_t i = 0; i < preds.size(); ++i) {
            auto& [errors, total] = counts[languages[i]];
            ++total;
            if (preds[i] != golds[i]) ++errors;
        }
        for (const auto& [lang, pair] : counts) {
            report.per_language_error[lang] =
                static_cast<double>(pair.first) / static_cast<double>(pair.second);
        }
    }
    return report;
}

json EvalReport::to_json() const {
    json j;
    j["macro_f1"] = macro_f1;
    j["per_class"] = json::array();
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        j["per_class"].push_back({{"class", c},
                                  {"precision", per_class[c].precision},
                                  {"recall", per_class[c].recall},
                                  {"f1", per_class[c].f1},
                                  {"support", per_class[c].support}});
    }
    j["confusion"] = confusion;
    j["per_language_error"] = per_language_error;
    return j;
}

std::string EvalReport::table() const {
    std::ostringstream out;
    out << "macro-F1: " << std::fixed << std::setprecision(4) << macro_f1 << "\n\n";
    out << std::left << std::setw(8) << "class" << std::right << std::setw(11) << "precision"
        << std::setw(9) << "recall" << std::setw(9) << "f1" << std::setw(10) << "support"
        << "\n";
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        out << std::left << std::setw(8) << c << std::right << std::setw(11) << std::fixed
            << std::setprecision(4) << per_class[c].precision << std::setw(9)
            << per_class[c].recall << std::setw(9) << per_class[c].f1 << std::setw(10)
            << per_class[c].support << "\n";
    }
    if (!per_language_error.empty()) {
        out << "\n" << std::left << std::setw(14) << "language" << std::right << std::setw(12)
            << "error rate" << "\n";
        for (const auto& [lang, err] : per_language_error) {
            out << std::left << std::setw(14) << lang << std::right << std::setw(12)
                << std::fixed << std::setprecision(4) << err << "\n";
        }
    }
    return out.str();
}

}  // namespace codedet
