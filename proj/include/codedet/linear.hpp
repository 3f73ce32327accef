#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "codedet/features.hpp"

namespace codedet {

enum class WeightScheme { Uniform, Balanced, EffectiveNumber };

std::string_view to_string(WeightScheme scheme);
WeightScheme weight_scheme_from_string(std::string_view s);

struct ClassWeights {
    WeightScheme scheme = WeightScheme::Uniform;
    double beta = 0.9995;
    std::vector<double> weights;
};

ClassWeights uniform_weights(std::size_t num_classes);

// w_c = total / (num_classes * n_c).
ClassWeights balanced_weights(std::span<const std::uint64_t> counts);

// Effective-number weights w_c = (1 - beta) / (1 - beta^n_c), rescaled to
// unit mean. Requires every count >= 1 and beta in (0, 1).
ClassWeights effective_number_weights(std::span<const std::uint64_t> counts,
                                      double beta = 0.9995);

struct TrainConfig {
    double l2 = 1.0;
    int epochs = 50;
    double lr = 0.5;
    double lr_decay = 0.0;       // lr_t = lr / (1 + lr_decay * epoch)
    int batch_size = 256;        // 0 = full batch
    double label_smoothing = 0.0;
    std::uint64_t seed = 1337;
};

struct TrainInfo {
    int epochs_run = 0;
    double final_loss = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> epoch_loss;
};

// Logistic regression parameters. Binary models store a single weight row
// and score through a sigmoid; multinomial models store one row per class.
struct LinearModel {
    std::size_t num_classes = 2;
    std::size_t rows = 1;
    std::size_t dim = 0;
    std::vector<double> weights;  // rows x dim, row-major
    std::vector<double> bias;     // rows
    std::uint64_t vocab_hash = 0;
    TrainConfig hyper;
    TrainInfo info;

    nlohmann::json to_json() const;
    static LinearModel from_json(const nlohmann::json& j);
};

// Weighted cross-entropy + L2 objective over the batch rows selected by
// `batch_indices`:
//
//   J = (1/|B|) sum_i cw[y_i] * CE_i  +  (l2/2) * ||W||^2
//
// Label smoothing mixes each one-hot target with the uniform distribution.
// Fills grad_w (rows x dim) and grad_b (rows); returns J. The trainer and
// the finite-difference check share this exact code path.
double loss_and_gradient(const LinearModel& model, std::span<const SparseVector> features,
                         std::span<const int> labels, std::span<const std::size_t> batch_indices,
                         const ClassWeights& class_weights, double l2, double label_smoothing,
                         std::span<double> grad_w, std::span<double> grad_b);

// Deterministic seeded mini-batch SGD with per-epoch shuffling. Throws if
// fewer than two classes are present or the loss goes non-finite.
LinearModel train(std::span<const SparseVector> features, std::span<const int> labels,
                  const ClassWeights& class_weights, const TrainConfig& cfg,
                  std::size_t num_classes, std::uint64_t vocab_hash = 0);

// Probabilities over the label space; always sums to 1. Binary models
// return {p(class 0), p(class 1)}.
std::vector<double> predict_proba(const LinearModel& model, const SparseVector& features);

// Raw decision values (one per weight row).
std::vector<double> decision_logits(const LinearModel& model, const SparseVector& features);

}  // namespace codedet
