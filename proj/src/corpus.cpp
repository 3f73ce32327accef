#include "codedet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "codedet/utf8.hpp"

namespace codedet {

using nlohmann::json;

Task task_from_string(std::string_view s) {
    if (s == "A" || s == "a") return Task::A;
    if (s == "B" || s == "b") return Task::B;
    throw std::invalid_argument("unknown task '" + std::string(s) + "' (expected A or B)");
}

std::string_view to_string(Task task) { return task == Task::A ? "A" : "B"; }

int num_label_classes(Task task) { return task == Task::A ? 2 : 11; }

namespace {

bool blank_line(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::vector<CodeSample> load_dataset(const std::string& path, Task task) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    const int num_classes = num_label_classes(task);
    std::vector<CodeSample> samples;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (blank_line(line)) continue;

        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed record: " + e.what());
        }
        if (!record.is_object() || !record.contains("id") || !record.contains("code")) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": record must be an object with 'id' and 'code'");
        }

        CodeSample sample;
        try {
            sample.id = record.at("id").is_string() ? record.at("id").get<std::string>()
                                                    : record.at("id").dump();
            sample.text = record.at("code").get<std::string>();
            if (record.contains("label") && !record.at("label").is_null()) {
                sample.label = record.at("label").get<int>();
            }
            if (record.contains("language") && !record.at("language").is_null()) {
                sample.language = record.at("language").get<std::string>();
            }
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed record: " + e.what());
        }

        if (sample.id.empty()) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty id");
        }
        if (!seen_ids.insert(sample.id).second) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": duplicate id '" + sample.id + "'");
        }
        if (sample.label && (*sample.label < 0 || *sample.label >= num_classes)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": id '" +
                                     sample.id + "' has label " + std::to_string(*sample.label) +
                                     " outside task " + std::string(to_string(task)) +
                                     " range [0, " + std::to_string(num_classes) + ")");
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

void save_dataset(std::span<const CodeSample> samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    for (const CodeSample& sample : samples) {
        json record;
        record["id"] = sample.id;
        record["code"] = sample.text;
        if (sample.label) record["label"] = *sample.label;
        if (sample.language) record["language"] = *sample.language;
        out << record.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

DatasetStats compute_stats(std::span<const CodeSample> samples) {
    DatasetStats stats;
    stats.total = samples.size();

    std::map<std::string, std::map<int, std::vector<std::uint64_t>>> cell_lengths;
    for (const CodeSample& sample : samples) {
        const std::string lang = sample.language.value_or("");
        const int label = sample.label.value_or(-1);
        ++stats.language_counts[lang];
        ++stats.label_counts[label];
        cell_lengths[lang][label].push_back(utf8::length(sample.text));
    }

    if (stats.total > 0) {
        for (const auto& [lang, count] : stats.language_counts) {
            stats.language_percent[lang] =
                100.0 * static_cast<double>(count) / static_cast<double>(stats.total);
        }
    }

    for (auto& [lang, by_label] : cell_lengths) {
        for (auto& [label, lengths] : by_label) {
            LengthStats cell;
            cell.count = lengths.size();
            std::uint64_t sum = 0;
            for (std::uint64_t len : lengths) {
                sum += len;
                cell.max = std::max(cell.max, len);
            }
            cell.mean = static_cast<double>(sum) / static_cast<double>(lengths.size());
            std::sort(lengths.begin(), lengths.end());
            const std::size_t n = lengths.size();
            cell.median = (n % 2 == 1)
                              ? static_cast<double>(lengths[n / 2])
                              : 0.5 * static_cast<double>(lengths[n / 2 - 1] + lengths[n / 2]);
            stats.per_cell[lang][label] = cell;
        }
    }
    return stats;
}

namespace {

std::string display_language(const std::string& lang) { return lang.empty() ? "-" : lang; }

std::string display_label(int label) { return label < 0 ? "-" : std::to_string(label); }

}  // namespace

std::string stats_table(const DatasetStats& stats) {
    std::ostringstream out;
    out << "total samples: " << stats.total << "\n\n";

    out << std::left << std::setw(14) << "language" << std::right << std::setw(10) << "count"
        << std::setw(10) << "percent" << "\n";
    for (const auto& [lang, count] : stats.language_counts) {
        out << std::left << std::setw(14) << display_language(lang) << std::right
            << std::setw(10) << count << std::setw(10) << std::fixed << std::setprecision(2)
            << stats.language_percent.at(lang) << "\n";
    }

    out << "\n" << std::left << std::setw(14) << "label" << std::right << std::setw(10)
        << "count" << "\n";
    for (const auto& [label, count] : stats.label_counts) {
        out << std::left << std::setw(14) << display_label(label) << std::right << std::setw(10)
            << count << "\n";
    }

    out << "\n" << std::left << std::setw(14) << "language" << std::setw(7) << "label"
        << std::right << std::setw(10) << "count" << std::setw(12) << "mean" << std::setw(12)
        << "median" << std::setw(10) << "max" << "\n";
    for (const auto& [lang, by_label] : stats.per_cell) {
        for (const auto& [label, cell] : by_label) {
            out << std::left << std::setw(14) << display_language(lang) << std::setw(7)
                << display_label(label) << std::right << std::setw(10) << cell.count
                << std::setw(12) << std::fixed << std::setprecision(1) << cell.mean
                << std::setw(12) << cell.median << std::setw(10) << cell.max << "\n";
        }
    }
    return out.str();
}

nlohmann::json stats_to_json(const DatasetStats& stats) {
    json out;
    out["total"] = stats.total;
    out["languages"] = json::object();
    for (const auto& [lang, count] : stats.language_counts) {
        out["languages"][display_language(lang)] = {
            {"count", count}, {"percent", stats.language_percent.at(lang)}};
    }
    out["labels"] = json::object();
    for (const auto& [label, count] : stats.label_counts) {
        out["labels"][display_label(label)] = count;
    }
    out["cells"] = json::array();
    for (const auto& [lang, by_label] : stats.per_cell) {
        for (const auto& [label, cell] : by_label) {
            out["cells"].push_back({{"language", display_language(lang)},
                                    {"label", display_label(label)},
                                    {"count", cell.count},
                                    {"mean", cell.mean},
                                    {"median", cell.median},
                                    {"max", cell.max}});
        }
    }
    return out;
}

}  // namespace codedet
