#include "acnn/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "acnn/errors.hpp"

namespace acnn {

std::vector<std::size_t> ModelParams::widths() const {
    std::vector<std::size_t> out;
    out.reserve(banks.size());
    for (const FilterBank& b : banks) out.push_back(b.width);
    return out;
}

ConvFilter ModelParams::filter(std::size_t bank, std::size_t index) const {
    const FilterBank& b = banks.at(bank);
    auto row = b.weights.row(index);
    return ConvFilter{b.width, {row.begin(), row.end()}, b.biases.at(index)};
}

ModelParams ModelParams::init(const std::vector<std::size_t>& widths, std::size_t n_per_width,
                              std::size_t input_width, std::uint64_t seed) {
    if (widths.empty()) throw ConfigError("at least one filter width is required");
    if (n_per_width == 0) throw ConfigError("filters per width must be positive");
    if (input_width == 0) throw ConfigError("input width must be positive");
    for (std::size_t k : widths)
        if (k == 0) throw ConfigError("filter width must be positive");

    ModelParams p;
    p.input_width = input_width;
    Rng rng(seed);
    for (std::size_t k : widths) {
        FilterBank bank;
        bank.width = k;
        bank.weights = Matrix(n_per_width, k * input_width);
        bank.biases.assign(n_per_width, 0.0);
        for (double& w : bank.weights.data()) w = rng.uniform(-0.01, 0.01);
        p.banks.push_back(std::move(bank));
    }
    std::size_t feature_dim = n_per_width * widths.size();
    p.softmax_w = Matrix(feature_dim, 3);
    for (double& w : p.softmax_w.data()) w = rng.uniform(-0.01, 0.01);
    p.softmax_b.assign(3, 0.0);
    return p;
}

ModelParams ModelParams::zeros_like(const ModelParams& other) {
    ModelParams p;
    p.input_width = other.input_width;
    for (const FilterBank& b : other.banks) {
        FilterBank z;
        z.width = b.width;
        z.weights = Matrix(b.weights.rows(), b.weights.cols());
        z.biases.assign(b.biases.size(), 0.0);
        p.banks.push_back(std::move(z));
    }
    p.softmax_w = Matrix(other.softmax_w.rows(), other.softmax_w.cols());
    p.softmax_b.assign(other.softmax_b.size(), 0.0);
    return p;
}

std::vector<std::span<double>> trainable_arrays(ModelParams& params) {
    std::vector<std::span<double>> arrays;
    for (FilterBank& b : params.banks) arrays.emplace_back(b.weights.data());
    for (FilterBank& b : params.banks) arrays.emplace_back(b.biases);
    arrays.emplace_back(params.softmax_w.data());
    arrays.emplace_back(params.softmax_b);
    return arrays;
}

std::vector<std::span<const double>> trainable_arrays(const ModelParams& params) {
    std::vector<std::span<const double>> arrays;
    for (const FilterBank& b : params.banks) arrays.emplace_back(b.weights.data());
    for (const FilterBank& b : params.banks) arrays.emplace_back(b.biases);
    arrays.emplace_back(params.softmax_w.data());
    arrays.emplace_back(params.softmax_b);
    return arrays;
}

std::size_t parameter_count(const ModelParams& params) {
    std::size_t n = 0;
    for (auto a : trainable_arrays(params)) n += a.size();
    return n;
}

std::size_t valid_windows(std::size_t true_length, std::size_t k) {
    return true_length >= k ? true_length - k + 1 : 1;
}

std::vector<double> window(const AttendedSentence& s, std::size_t j, std::size_t k) {
    if (j + k > s.rows.rows())
        throw std::out_of_range("window [" + std::to_string(j) + ", " + std::to_string(j + k)
                                + ") exceeds sentence length " + std::to_string(s.rows.rows()));
    auto span = s.rows.rows_span(j, k);
    return {span.begin(), span.end()};
}

FeatureMap conv_feature_map(const AttendedSentence& s, const ConvFilter& f) {
    std::size_t maxlen = s.rows.rows();
    std::size_t iw = s.rows.cols();
    if (f.width == 0 || f.width > maxlen)
        throw ConfigError("filter width " + std::to_string(f.width)
                          + " exceeds padded length " + std::to_string(maxlen));
    if (f.weights.size() != f.width * iw)
        throw ConfigError("filter has " + std::to_string(f.weights.size())
                          + " weights, expected " + std::to_string(f.width * iw));

    std::size_t tw = valid_windows(s.true_length, f.width);
    FeatureMap map(tw);
    std::size_t len = f.width * iw;
    const double* base = s.rows.data().data();
    for (std::size_t j = 0; j < tw; ++j) {
        const double* w = base + j * iw;
        double acc = f.bias;
        for (std::size_t t = 0; t < len; ++t) acc += w[t] * f.weights[t];
        map[j] = acc > 0.0 ? acc : 0.0;
    }
    return map;
}

FeatureMapStack feature_map_stack(const AttendedSentence& s, const FilterBank& bank) {
    FeatureMapStack stack;
    stack.reserve(bank.weights.rows());
    for (std::size_t f = 0; f < bank.weights.rows(); ++f) {
        auto row = bank.weights.row(f);
        stack.push_back(conv_feature_map(
            s, ConvFilter{bank.width, {row.begin(), row.end()}, bank.biases[f]}));
    }
    return stack;
}

double max_pool(std::span<const double> feature_map) {
    if (feature_map.empty()) throw ConfigError("max_pool over an empty feature map");
    return *std::max_element(feature_map.begin(), feature_map.end());
}

std::vector<double> dropout_mask(std::size_t dim, double keep_prob, Rng& rng) {
    if (!(keep_prob > 0.0) || keep_prob > 1.0)
        throw ConfigError("keep probability must be in (0, 1]");
    if (keep_prob == 1.0) return std::vector<double>(dim, 1.0);
    std::vector<double> mask(dim, 0.0);
    double scale = 1.0 / keep_prob;
    for (std::size_t i = 0; i < dim; ++i)
        if (rng.next_double() < keep_prob) mask[i] = scale;
    return mask;
}

Forward forward(const ModelParams& params, const AttendedSentence& s,
                std::span<const double> mask) {
    std::size_t iw = s.rows.cols();
    if (iw != params.input_width)
        throw ConfigError("input width " + std::to_string(iw) + " does not match model "
                          + std::to_string(params.input_width));
    std::size_t feature_dim = params.feature_dim();
    if (!mask.empty() && mask.size() != feature_dim)
        throw ConfigError("dropout mask length " + std::to_string(mask.size())
                          + " does not match feature dim " + std::to_string(feature_dim));
    if (params.softmax_w.rows() != feature_dim || params.softmax_w.cols() != 3
        || params.softmax_b.size() != 3)
        throw ConfigError("softmax layer shape mismatch");

    Forward out;
    out.pooled.resize(feature_dim);
    out.argmax.resize(feature_dim);

    std::size_t maxlen = s.rows.rows();
    const double* base = s.rows.data().data();
    std::size_t idx = 0;
    for (const FilterBank& bank : params.banks) {
        std::size_t k = bank.width;
        if (k == 0 || k > maxlen)
            throw ConfigError("filter width " + std::to_string(k) + " exceeds padded length "
                              + std::to_string(maxlen));
        std::size_t tw = valid_windows(s.true_length, k);
        std::size_t len = k * iw;
        for (std::size_t f = 0; f < bank.weights.rows(); ++f, ++idx) {
            auto wrow = bank.weights.row(f);
            double best = 0.0;
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < tw; ++j) {
                const double* w = base + j * iw;
                double acc = bank.biases[f];
                for (std::size_t t = 0; t < len; ++t) acc += w[t] * wrow[t];
                double c = acc > 0.0 ? acc : 0.0;
                if (j == 0 || c > best) {
                    best = c;
                    best_j = j;
                }
            }
            out.pooled[idx] = best;
            out.argmax[idx] = best_j;
        }
    }

    std::array<double, 3> logits{params.softmax_b[0], params.softmax_b[1], params.softmax_b[2]};
    for (std::size_t f = 0; f < feature_dim; ++f) {
        double z = out.pooled[f];
        if (!mask.empty()) z *= mask[f];
        if (z == 0.0) continue;
        logits[0] += params.softmax_w(f, 0) * z;
        logits[1] += params.softmax_w(f, 1) * z;
        logits[2] += params.softmax_w(f, 2) * z;
    }
    std::vector<double> probs = softmax(logits);
    out.probs = {probs[0], probs[1], probs[2]};
    return out;
}

}  // namespace acnn
