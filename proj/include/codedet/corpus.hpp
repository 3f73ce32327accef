#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace codedet {

enum class Task { A, B };

Task task_from_string(std::string_view s);
std::string_view to_string(Task task);

// Size of the label space: 2 for binary detection, 11 for attribution.
int num_label_classes(Task task);

// One code snippet. `label` and `language` are optional because test sets
// ship without them.
struct CodeSample {
    std::string id;
    std::string text;
    std::optional<int> label;
    std::optional<std::string> language;
};

// Reads a JSON Lines file with fields id, code, label, language. Labels are
// validated against the task's range; errors carry the line number and,
// for label violations, the record id.
std::vector<CodeSample> load_dataset(const std::string& path, Task task);

void save_dataset(std::span<const CodeSample> samples, const std::string& path);

struct LengthStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    std::uint64_t max = 0;
};

// Per-language / per-label descriptive statistics. Lengths are counted in
// Unicode scalar values. Untagged samples bucket under language "" and
// unlabeled samples under label -1.
struct DatasetStats {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> language_counts;
    std::map<std::string, double> language_percent;
    std::map<int, std::uint64_t> label_counts;
    std::map<std::string, std::map<int, LengthStats>> per_cell;
};

DatasetStats compute_stats(std::span<const CodeSample> samples);

std::string stats_table(const DatasetStats& stats);
nlohmann::json stats_to_json(const DatasetStats& stats);

}  // namespace codedet
