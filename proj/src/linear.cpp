#include "codedet/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "codedet/kernels.hpp"
#include "codedet/rng.hpp"

namespace codedet {

using nlohmann::json;

std::string_view to_string(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::Uniform: return "uniform";
        case WeightScheme::Balanced: return "balanced";
        case WeightScheme::EffectiveNumber: return "effective_number";
    }
    return "uniform";
}

WeightScheme weight_scheme_from_string(std::string_view s) {
    if (s == "uniform") return WeightScheme::Uniform;
    if (s == "balanced") return WeightScheme::Balanced;
    if (s == "effective_number" || s == "effective-number") return WeightScheme::EffectiveNumber;
    throw std::invalid_argument("unknown weight scheme '" + std::string(s) + "'");
}

ClassWeights uniform_weights(std::size_t num_classes) {
    ClassWeights cw;
    cw.scheme = WeightScheme::Uniform;
    cw.weights.assign(num_classes, 1.0);
    return cw;
}

ClassWeights balanced_weights(std::span<const std::uint64_t> counts) {
    if (counts.empty()) throw std::invalid_argument("balanced_weights: no classes");
    std::uint64_t total = 0;
    for (std::uint64_t n : counts) {
        if (n == 0) throw std::invalid_argument("balanced_weights: zero class count");
        total += n;
    }
    ClassWeights cw;
    cw.scheme = WeightScheme::Balanced;
    cw.weights.reserve(counts.size());
    for (std::uint64_t n : counts) {
        cw.weights.push_back(static_cast<double>(total) /
                             (static_cast<double>(counts.size()) * static_cast<double>(n)));
    }
    return cw;
}

ClassWeights effective_number_weights(std::span<const std::uint64_t> counts, double beta) {
    if (counts.empty()) throw std::invalid_argument("effective_number_weights: no classes");
    if (!(beta > 0.0 && beta < 1.0)) {
        throw std::invalid_argument("effective_number_weights: beta must be in (0, 1)");
    }
    ClassWeights cw;
    cw.scheme = WeightScheme::EffectiveNumber;
    cw.beta = beta;
    cw.weights.reserve(counts.size());
    for (std::uint64_t n : counts) {
        if (n == 0) {
            throw std::invalid_argument("effective_number_weights: zero class count");
        }
        // 1 - beta^n computed as -expm1(n log beta) to stay accurate when
        // beta^n is close to 1.
        const double denom = -std::expm1(static_cast<double>(n) * std::log(beta));
        cw.weights.push_back((1.0 - beta) / denom);
    }
    const double mean = std::accumulate(cw.weights.begin(), cw.weights.end(), 0.0) /
                        static_cast<double>(cw.weights.size());
    for (double& w : cw.weights) w /= mean;
    return cw;
}

namespace {

// log(1 + e^t) without overflow.
double softplus(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

double stable_sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_features(const LinearModel& model, const SparseVector& sv) {
    if (sv.dim != model.dim) {
        throw std::invalid_argument("feature dimension " + std::to_string(sv.dim) +
                                    " does not match model dimension " +
                                    std::to_string(model.dim));
    }
}

}  // namespace

std::vector<double> decision_logits(const LinearModel& model, const SparseVector& sv) {
    check_features(model, sv);
    std::vector<double> logits(model.rows);
    for (std::size_t r = 0; r < model.rows; ++r) {
        logits[r] = kernels::dot_gather(model.weights.data() + r * model.dim, sv.indices.data(),
                                        sv.values.data(), sv.nnz()) +
                    model.bias[r];
    }
    return logits;
}

std::vector<double> predict_proba(const LinearModel& model, const SparseVector& sv) {
    const std::vector<double> logits = decision_logits(model, sv);
    if (model.rows == 1) {
        const double p = stable_sigmoid(logits[0]);
        return {1.0 - p, p};
    }
    std::vector<double> probs(model.rows);
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t r = 0; r < model.rows; ++r) {
        probs[r] = std::exp(logits[r] - max_logit);
        sum += probs[r];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

double loss_and_gradient(const LinearModel& model, std::span<const SparseVector> features,
                         std::span<const int> labels, std::span<const std::size_t> batch_indices,
                         const ClassWeights& cw, double l2, double label_smoothing,
                         std::span<double> grad_w, std::span<double> grad_b) {
    const std::size_t rows = model.rows;
    const std::size_t dim = model.dim;
    if (grad_w.size() != rows * dim || grad_b.size() != rows) {
        throw std::invalid_argument("loss_and_gradient: gradient buffers have wrong size");
    }
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);

    const double inv_batch = 1.0 / static_cast<double>(batch_indices.size());
    const double smooth = label_smoothing;
    double ce_sum = 0.0;

    for (const std::size_t i : batch_indices) {
        const SparseVector& sv = features[i];
        const int label = labels[i];
        const double weight = cw.weights[static_cast<std::size_t>(label)];

        if (rows == 1) {
            const double z = kernels::dot_gather(model.weights.data(), sv.indices.data(),
                                                 sv.values.data(), sv.nnz()) +
                             model.bias[0];
            const double target =
                (label == 1 ? 1.0 - smooth : 0.0) + smooth * 0.5;
            ce_sum += weight * (target * softplus(-z) + (1.0 - target) * softplus(z));
            const double dz = weight * (stable_sigmoid(z) - target) * inv_batch;
            kernels::scatter_axpy(grad_w.data(), dz, sv.indices.data(), sv.values.data(),
                                  sv.nnz());
            grad_b[0] += dz;
        } else {
            std::vector<double> logits(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                logits[r] = kernels::dot_gather(model.weights.data() + r * dim,
                                                sv.indices.data(), sv.values.data(), sv.nnz()) +
                            model.bias[r];
            }
            const double max_logit = *std::max_element(logits.begin(), logits.end());
            double exp_sum = 0.0;
            for (double z : logits) exp_sum += std::exp(z - max_logit);
            const double lse = max_logit + std::log(exp_sum);

            double target_dot_logits = 0.0;
            const double uniform = smooth / static_cast<double>(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                const double target =
                    uniform + (static_cast<int>(r) == label ? 1.0 - smooth : 0.0);
                target_dot_logits += target * logits[r];
                const double prob = std::exp(logits[r] - lse);
                const double dz = weight * (prob - target) * inv_batch;
                kernels::scatter_axpy(grad_w.data() + r * dim, dz, sv.indices.data(),
                                      sv.values.data(), sv.nnz());
                grad_b[r] += dz;
            }
            ce_sum += weight * (lse - target_dot_logits);
        }
    }

    // L2 on the weights, not the bias.
    kernels::axpy(grad_w.data(), l2, model.weights.data(), rows * dim);
    const double penalty = 0.5 * l2 * kernels::sum_squares(model.weights.data(), rows * dim);
    return ce_sum * inv_batch + penalty;
}

LinearModel train(std::span<const SparseVector> features, std::span<const int> labels,
                  const ClassWeights& cw, const TrainConfig& cfg, std::size_t num_classes,
                  std::uint64_t vocab_hash) {
    if (features.empty()) throw std::invalid_argument("train: empty training set");
    if (features.size() != labels.size()) {
        throw std::invalid_argument("train: features/labels length mismatch");
    }
    if (num_classes < 2) throw std::invalid_argument("train: need at least 2 classes");
    if (cw.weights.size() != num_classes) {
        throw std::invalid_argument("train: class weight count does not match num_classes");
    }
    if (cfg.epochs < 1 || cfg.lr <= 0.0 || cfg.l2 < 0.0 || cfg.label_smoothing < 0.0 ||
        cfg.label_smoothing >= 1.0 || cfg.batch_size < 0) {
        throw std::invalid_argument("train: invalid hyperparameters");
    }

    std::set<int> distinct;
    for (const int label : labels) {
        if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
            throw std::invalid_argument("train: label " + std::to_string(label) +
                                        " outside [0, " + std::to_string(num_classes) + ")");
        }
        distinct.insert(label);
    }
    if (distinct.size() < 2) {
        throw std::runtime_error("train: training data contains a single class");
    }

    const std::uint32_t dim = features.front().dim;
    for (const SparseVector& sv : features) {
        if (sv.dim != dim) throw std::invalid_argument("train: inconsistent feature dimensions");
    }

    LinearModel model;
    model.num_classes = num_classes;
    model.rows = (num_classes == 2) ? 1 : num_classes;
    model.dim = dim;
    model.weights.assign(model.rows * model.dim, 0.0);
    model.bias.assign(model.rows, 0.0);
    model.vocab_hash = vocab_hash;
    model.hyper = cfg;
    model.info.seed = cfg.seed;

    const std::size_t n = features.size();
    const std::size_t batch =
        cfg.batch_size == 0 ? n : std::min<std::size_t>(n, static_cast<std::size_t>(cfg.batch_size));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(Rng::derive(cfg.seed, "linear-train"));

    std::vector<double> grad_w(model.rows * model.dim);
    std::vector<double> grad_b(model.rows);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        const double lr = cfg.lr / (1.0 + cfg.lr_decay * static_cast<double>(epoch));

        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t count = std::min(batch, n - start);
            const std::span<const std::size_t> batch_indices(order.data() + start, count);
            const double loss =
                loss_and_gradient(model, features, labels, batch_indices, cw, cfg.l2,
                                  cfg.label_smoothing, grad_w, grad_b);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("train: loss is not finite at epoch " +
                                         std::to_string(epoch));
            }
            kernels::axpy(model.weights.data(), -lr, grad_w.data(), model.weights.size());
            kernels::axpy(model.bias.data(), -lr, grad_b.data(), model.bias.size());
            epoch_loss += loss;
            ++batches;
        }
        model.info.epoch_loss.push_back(epoch_loss / static_cast<double>(batches));
        model.info.epochs_run = epoch + 1;
    }
    model.info.final_loss = model.info.epoch_loss.back();
    return model;
}

json LinearModel::to_json() const {
    json j;
    j["num_classes"] = num_classes;
    j["rows"] = rows;
    j["dim"] = dim;
    j["weights"] = weights;
    j["bias"] = bias;
    char hash_hex[17];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(vocab_hash));
    j["vocab_hash"] = hash_hex;
    j["hyper"] = {{"l2", hyper.l2},
                  {"epochs", hyper.epochs},
                  {"lr", hyper.lr},
                  {"lr_decay", hyper.lr_decay},
                  {"batch_size", hyper.batch_size},
                  {"label_smoothing", hyper.label_smoothing},
                  {"seed", hyper.seed}};
    j["train_info"] = {{"epochs_run", info.epochs_run},
                       {"final_loss", info.final_loss},
                       {"seed", info.seed}};
    return j;
}

LinearModel LinearModel::from_json(const json& j) {
    LinearModel model;
    model.num_classes = j.at("num_classes").get<std::size_t>();
    model.rows = j.at("rows").get<std::size_t>();
    model.dim = j.at("dim").get<std::size_t>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<std::vector<double>>();
    model.vocab_hash = std::stoull(j.at("vocab_hash").get<std::string>(), nullptr, 16);
    if (model.weights.size() != model.rows * model.dim || model.bias.size() != model.rows) {
        throw std::runtime_error("linear model file has inconsistent dimensions");
    }
    const json& hyper = j.at("hyper");
    model.hyper.l2 = hyper.at("l2").get<double>();
    model.hyper.epochs = hyper.at("epochs").get<int>();
    model.hyper.lr = hyper.at("lr").get<double>();
    model.hyper.lr_decay = hyper.value("lr_decay", 0.0);
    model.hyper.batch_size = hyper.at("batch_size").get<int>();
    model.hyper.label_smoothing = hyper.at("label_smoothing").get<double>();
    model.hyper.seed = hyper.at("seed").get<std::uint64_t>();
    const json& train_info = j.at("train_info");
    model.info.epochs_run = train_info.at("epochs_run").get<int>();
    model.info.final_loss = train_info.at("final_loss").get<double>();
    model.info.seed = train_info.at("seed").get<std::uint64_t>();
    return model;
}

}  // namespace codedet
