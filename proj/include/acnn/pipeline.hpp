#pragma once

#include <array>
#include <optional>
#include <string>

#include "acnn/archive.hpp"
#include "acnn/train.hpp"

namespace acnn {

std::string read_file(const std::string& path);

struct TrainFiles {
    std::string data_train;
    std::string data_test;
    std::string vectors;
    std::optional<std::string> stopwords;  // default list when absent
};

struct TrainOutput {
    ModelArchive archive;
    std::vector<EpochStats> history;
    std::size_t train_skipped = 0;
    std::size_t test_skipped = 0;
};

// Full training pipeline: parse both splits, build corpora, load vectors,
// train, and assemble the archive.
TrainOutput run_training(const TrainFiles& files, const TrainConfig& config,
                         const EpochCallback& on_epoch = {});

// One epoch per row: epoch, train_loss, test_accuracy, test_macro_f1.
void write_history(const std::vector<EpochStats>& history, const std::string& path);

struct EvalResult {
    ConfusionMatrix confusion;
    double accuracy = 0;
    double macro_f1 = 0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
};

EvalResult evaluate_file(const ModelArchive& archive, const std::string& test_path,
                         const std::optional<std::string>& stopwords_path = {});

struct Prediction {
    Polarity label = Polarity::neutral;
    std::array<double, 3> probs{};  // positive, neutral, negative
};

// Encodes (sentence, aspect) with the archive's vocabulary and runs the
// model at keep probability 1. The sentence may contain the $T$
// placeholder, in which case the aspect is substituted for it.
Prediction predict(const ModelArchive& archive, const std::string& sentence,
                   const std::string& aspect,
                   const std::optional<std::string>& stopwords_path = {});

// The small configuration used by the gradient-check command: d=8,
// maxlen=10, widths {2,3}, 2 filters per width, 4 random examples.
double tiny_grad_check(std::uint64_t seed, std::size_t dim, Variant variant,
                       double corrupt = 0.0);

}  // namespace acnn
