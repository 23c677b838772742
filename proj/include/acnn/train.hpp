#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "acnn/embedding.hpp"
#include "acnn/metrics.hpp"
#include "acnn/model.hpp"
#include "acnn/text.hpp"

namespace acnn {

struct TrainConfig {
    Variant variant = Variant::atten_emb2;
    std::vector<std::size_t> widths{2, 3, 4};
    std::size_t n_per_width = 200;
    std::size_t dim = 200;
    double keep_prob = 0.5;   // evaluation always runs at 1.0
    double l2_lambda = 2.6;   // applied to the softmax weights only
    std::size_t batch_size = 64;
    double learning_rate = 0.001;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::size_t epochs = 30;
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError
};

struct LabeledSentence {
    AttendedSentence sentence;
    std::array<double, 3> label{};  // one-hot over {positive, neutral, negative}
};

struct Batch {
    std::vector<LabeledSentence> items;
};

std::array<double, 3> one_hot(Polarity label);

// Mean cross-entropy over the batch plus l2_lambda * |softmax_w|^2.
// `masks` holds one dropout mask per example, or is empty for the identity.
double loss(const ModelParams& params, const Batch& batch,
            const std::vector<std::vector<double>>& masks, double l2_lambda);

// Exact gradient of `loss` with respect to every trainable array, returned
// in a parameter-shaped container. Max-pool routes gradient to the recorded
// argmax window only; ReLU passes gradient iff the pre-activation was
// positive.
ModelParams gradients(const ModelParams& params, const Batch& batch,
                      const std::vector<std::vector<double>>& masks, double l2_lambda);

// Single-pass variant used by the training loop; returns the loss and
// accumulates gradients into `grads` (which must be zeroed, parameter-shaped).
double loss_and_gradients(const ModelParams& params, const Batch& batch,
                          const std::vector<std::vector<double>>& masks, double l2_lambda,
                          ModelParams& grads);

struct AdamState {
    ModelParams m;
    ModelParams v;
    std::size_t step = 0;

    static AdamState zeros_like(const ModelParams& params);
};

// Standard Adam with bias correction; updates params and state in place.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const TrainConfig& config);

// Plain gradient descent, kept as a debugging fallback next to Adam.
void sgd_step(ModelParams& params, const ModelParams& grads, double learning_rate);

// Compares the analytic gradient against central finite differences on up
// to `samples` coordinates (all of them when the model has fewer) and
// returns the largest relative error. `corrupt` is a verification hook: a
// nonzero value is added to one analytic coordinate so the negative-control
// path can be exercised.
double grad_check(const ModelParams& params, const Batch& batch, double l2_lambda,
                  double epsilon, std::uint64_t seed, std::size_t samples = 200,
                  double corrupt = 0.0);

struct EpochStats {
    std::size_t epoch = 0;
    double train_loss = 0;
    double eval_accuracy = 0;
    double eval_macro_f1 = 0;
};

struct TrainResult {
    ModelParams params;
    std::vector<EpochStats> history;
};

using EpochCallback = std::function<void(const EpochStats&)>;

ConfusionMatrix evaluate(const ModelParams& params, const Corpus& corpus,
                         const EmbeddingTable& table, Variant variant);

// Shuffled mini-batch training. All randomness (parameter init, shuffling,
// dropout) derives from config.seed; two runs with identical inputs produce
// bit-identical results.
TrainResult train(const TrainConfig& config, const Corpus& train_corpus,
                  const Corpus& eval_corpus, const EmbeddingTable& table,
                  const EpochCallback& on_epoch = {});

}  // namespace acnn
