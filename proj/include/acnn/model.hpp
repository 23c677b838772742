#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "acnn/attention.hpp"
#include "acnn/matrix.hpp"
#include "acnn/rng.hpp"

namespace acnn {

// One convolution filter over `width` consecutive input rows, flattened
// row-major to match the contiguous window layout.
struct ConvFilter {
    std::size_t width = 0;
    std::vector<double> weights;  // width * input_width
    double bias = 0.0;
};

// Post-ReLU convolution outputs across window positions, one per filter.
using FeatureMap = std::vector<double>;
using FeatureMapStack = std::vector<FeatureMap>;

// All filters of one width, one filter per matrix row.
struct FilterBank {
    std::size_t width = 0;
    Matrix weights;               // n x (width * input_width)
    std::vector<double> biases;   // n

    bool operator==(const FilterBank&) const = default;
};

// Every trainable array: per-width conv filters and the softmax layer.
// Embeddings are frozen and live in EmbeddingTable.
struct ModelParams {
    std::vector<FilterBank> banks;  // one per configured width
    Matrix softmax_w;               // feature_dim x 3
    std::vector<double> softmax_b;  // 3
    std::size_t input_width = 0;    // 2d

    std::size_t n_per_width() const { return banks.empty() ? 0 : banks[0].biases.size(); }
    std::size_t feature_dim() const { return n_per_width() * banks.size(); }
    std::vector<std::size_t> widths() const;

    ConvFilter filter(std::size_t bank, std::size_t index) const;

    // weights ~ U[-0.01, 0.01], biases zero
    static ModelParams init(const std::vector<std::size_t>& widths, std::size_t n_per_width,
                            std::size_t input_width, std::uint64_t seed);
    static ModelParams zeros_like(const ModelParams& other);

    bool operator==(const ModelParams&) const = default;
};

// The trainable arrays in their canonical order: per-width filter weights
// and biases, then softmax weights and bias. Update, serialization and
// gradient-check code all walk this order.
std::vector<std::span<double>> trainable_arrays(ModelParams& params);
std::vector<std::span<const double>> trainable_arrays(const ModelParams& params);
std::size_t parameter_count(const ModelParams& params);

// Number of window positions a width-k filter slides over: sentences
// shorter than k fall back to the single window at 0, which overlaps the
// zero PAD rows.
std::size_t valid_windows(std::size_t true_length, std::size_t k);

// Concatenation of rows j .. j+k-1.
std::vector<double> window(const AttendedSentence& s, std::size_t j, std::size_t k);

// ReLU(<window_j, weights> + bias) over the valid window positions.
FeatureMap conv_feature_map(const AttendedSentence& s, const ConvFilter& f);

// Feature maps of every filter in the bank; all maps share one length.
FeatureMapStack feature_map_stack(const AttendedSentence& s, const FilterBank& bank);

double max_pool(std::span<const double> feature_map);

// Inverted dropout: entries are 1/keep_prob with probability keep_prob,
// else 0. keep_prob == 1 yields all ones without consuming the generator.
std::vector<double> dropout_mask(std::size_t dim, double keep_prob, Rng& rng);

struct Forward {
    std::array<double, 3> probs{};
    std::vector<double> pooled;       // per-filter max, post-ReLU, pre-mask
    std::vector<std::size_t> argmax;  // winning window per filter (lowest index on ties)
};

Forward forward(const ModelParams& params, const AttendedSentence& s,
                std::span<const double> mask = {});

}  // namespace acnn
