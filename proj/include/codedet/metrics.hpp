#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace codedet {

// Unweighted mean of per-class F1. A class that appears in neither the gold
// labels nor the predictions is skipped; a class that appears in either
// contributes its F1 (0 when precision+recall is 0). Degenerate 0/0
// precision and recall count as 0.
double macro_f1(std::span<const int> preds, std::span<const int> golds,
                std::size_t num_classes);

struct ClassScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

struct EvalReport {
    double macro_f1 = 0.0;
    std::vector<ClassScore> per_class;
    std::vector<std::vector<std::uint64_t>> confusion;  // [gold][pred]
    std::map<std::string, double> per_language_error;

    nlohmann::json to_json() const;
    std::string table() const;
};

// languages may be empty (no per-language breakdown) or one tag per sample.
EvalReport eval_report(std::span<const int> preds, std::span<const int> golds,
                       std::span<const std::string> languages, std::size_t num_classes);

}  // namespace codedet
