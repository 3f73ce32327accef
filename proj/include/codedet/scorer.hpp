#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "codedet/corpus.hpp"
#include "codedet/features.hpp"
#include "codedet/linear.hpp"

namespace codedet {

// Anything that can turn (uid, text) batches into probability vectors.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual std::size_t num_classes() const = 0;
    virtual std::unordered_map<std::string, std::vector<double>> score_batch(
        std::span<const std::pair<std::string, std::string>> requests) = 0;
};

// Self-contained native scorer: a vocabulary plus the linear model trained
// against it.
struct ModelBundle {
    Task task = Task::A;
    Vocabulary vocab;
    LinearModel model;

    nlohmann::json to_json() const;
    static ModelBundle from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static ModelBundle load(const std::string& path);
};

class NativeLinearScorer : public Scorer {
public:
    explicit NativeLinearScorer(ModelBundle bundle);

    std::size_t num_classes() const override { return bundle_.model.num_classes; }
    std::unordered_map<std::string, std::vector<double>> score_batch(
        std::span<const std::pair<std::string, std::string>> requests) override;

    const ModelBundle& bundle() const { return bundle_; }

private:
    ModelBundle bundle_;
};

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Client for scorer protocol v1: newline-delimited JSON over the child's
// stdin/stdout. The parent sends {"v":1,"classes":K} once and the child
// acknowledges with {"ok":true}. Each batch is one request line per uid
// followed by a blank line; the child answers one response line per uid (in
// any order) followed by a blank line and exits 0 when stdin closes.
class ExternalScorer : public Scorer {
public:
    ExternalScorer(std::string command, std::size_t classes);
    ~ExternalScorer() override;

    ExternalScorer(const ExternalScorer&) = delete;
    ExternalScorer& operator=(const ExternalScorer&) = delete;

    std::size_t num_classes() const override { return classes_; }
    std::unordered_map<std::string, std::vector<double>> score_batch(
        std::span<const std::pair<std::string, std::string>> requests) override;

private:
    std::string read_line();
    void shutdown() noexcept;

    std::string command_;
    std::size_t classes_;
    int child_pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string read_buffer_;
};

}  // namespace codedet
