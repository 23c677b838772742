#include "acnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "acnn/errors.hpp"

namespace acnn {

namespace {

constexpr double kLogFloor = 1e-12;

double cross_entropy(const std::array<double, 3>& probs, const std::array<double, 3>& label) {
    double ce = 0;
    for (std::size_t c = 0; c < 3; ++c) {
        if (label[c] == 0.0) continue;
        ce -= label[c] * std::log(std::max(probs[c], kLogFloor));
    }
    return ce;
}

double squared_norm(const Matrix& m) {
    double s = 0;
    for (double v : m.data()) s += v * v;
    return s;
}

void check_masks(const Batch& batch, const std::vector<std::vector<double>>& masks,
                 std::size_t feature_dim) {
    if (masks.empty()) return;
    if (masks.size() != batch.items.size())
        throw ConfigError("expected one dropout mask per example");
    for (const auto& m : masks)
        if (m.size() != feature_dim)
            throw ConfigError("dropout mask length does not match feature dim");
}

}  // namespace

void TrainConfig::validate() const {
    if (widths.empty()) throw ConfigError("at least one filter width is required");
    for (std::size_t k : widths)
        if (k == 0) throw ConfigError("filter width must be positive");
    if (n_per_width == 0) throw ConfigError("filters per width must be positive");
    if (dim == 0) throw ConfigError("embedding dimension must be positive");
    if (!(keep_prob > 0.0) || keep_prob > 1.0)
        throw ConfigError("keep probability must be in (0, 1]");
    if (l2_lambda < 0.0) throw ConfigError("l2 weight must be non-negative");
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
        throw ConfigError("adam betas must be in [0, 1)");
    if (!(adam_eps > 0.0)) throw ConfigError("adam epsilon must be positive");
}

std::array<double, 3> one_hot(Polarity label) {
    std::array<double, 3> y{};
    y[static_cast<std::size_t>(label)] = 1.0;
    return y;
}

double loss(const ModelParams& params, const Batch& batch,
            const std::vector<std::vector<double>>& masks, double l2_lambda) {
    if (batch.items.empty()) throw ConfigError("loss over an empty batch");
    check_masks(batch, masks, params.feature_dim());
    double ce_sum = 0;
    for (std::size_t i = 0; i < batch.items.size(); ++i) {
        const LabeledSentence& item = batch.items[i];
        std::span<const double> mask = masks.empty() ? std::span<const double>{} : masks[i];
        Forward fw = forward(params, item.sentence, mask);
        ce_sum += cross_entropy(fw.probs, item.label);
    }
    return ce_sum / static_cast<double>(batch.items.size())
           + l2_lambda * squared_norm(params.softmax_w);
}

double loss_and_gradients(const ModelParams& params, const Batch& batch,
                          const std::vector<std::vector<double>>& masks, double l2_lambda,
                          ModelParams& grads) {
    if (batch.items.empty()) throw ConfigError("gradients over an empty batch");
    std::size_t feature_dim = params.feature_dim();
    check_masks(batch, masks, feature_dim);

    double inv_b = 1.0 / static_cast<double>(batch.items.size());
    double ce_sum = 0;

    for (std::size_t i = 0; i < batch.items.size(); ++i) {
        const LabeledSentence& item = batch.items[i];
        std::span<const double> mask = masks.empty() ? std::span<const double>{} : masks[i];
        Forward fw = forward(params, item.sentence, mask);
        ce_sum += cross_entropy(fw.probs, item.label);

        // softmax + cross-entropy collapses to probs - y, scaled by the
        // batch mean
        std::array<double, 3> dlogits;
        for (std::size_t c = 0; c < 3; ++c)
            dlogits[c] = (fw.probs[c] - item.label[c]) * inv_b;

        for (std::size_t c = 0; c < 3; ++c) grads.softmax_b[c] += dlogits[c];

        const AttendedSentence& s = item.sentence;
        std::size_t iw = s.rows.cols();
        const double* base = s.rows.data().data();
        std::size_t idx = 0;
        for (std::size_t b = 0; b < params.banks.size(); ++b) {
            const FilterBank& bank = params.banks[b];
            FilterBank& gbank = grads.banks[b];
            std::size_t len = bank.width * iw;
            for (std::size_t f = 0; f < bank.weights.rows(); ++f, ++idx) {
                double m = mask.empty() ? 1.0 : mask[idx];
                double z = fw.pooled[idx] * m;
                double dz_masked = 0;
                for (std::size_t c = 0; c < 3; ++c) {
                    grads.softmax_w(idx, c) += z * dlogits[c];
                    dz_masked += params.softmax_w(idx, c) * dlogits[c];
                }
                // back through the mask, then the max (argmax window only),
                // then ReLU (pooled > 0 iff pre-activation > 0)
                double dpool = dz_masked * m;
                if (dpool == 0.0 || fw.pooled[idx] <= 0.0) continue;
                gbank.biases[f] += dpool;
                const double* win = base + fw.argmax[idx] * iw;
                auto grow = gbank.weights.row(f);
                for (std::size_t t = 0; t < len; ++t) grow[t] += dpool * win[t];
            }
        }
    }

    // d/dW of l2_lambda * |W|^2
    if (l2_lambda != 0.0) {
        const auto& w = params.softmax_w.data();
        auto& gw = grads.softmax_w.data();
        for (std::size_t t = 0; t < w.size(); ++t) gw[t] += 2.0 * l2_lambda * w[t];
    }

    return ce_sum * inv_b + l2_lambda * squared_norm(params.softmax_w);
}

ModelParams gradients(const ModelParams& params, const Batch& batch,
                      const std::vector<std::vector<double>>& masks, double l2_lambda) {
    ModelParams grads = ModelParams::zeros_like(params);
    loss_and_gradients(params, batch, masks, l2_lambda, grads);
    return grads;
}

AdamState AdamState::zeros_like(const ModelParams& params) {
    return AdamState{ModelParams::zeros_like(params), ModelParams::zeros_like(params), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const TrainConfig& config) {
    auto theta = trainable_arrays(params);
    auto g = trainable_arrays(grads);
    auto m = trainable_arrays(state.m);
    auto v = trainable_arrays(state.v);
    if (theta.size() != g.size() || theta.size() != m.size() || theta.size() != v.size())
        throw ConfigError("adam_step: array count mismatch");

    ++state.step;
    double t = static_cast<double>(state.step);
    double bc1 = 1.0 - std::pow(config.adam_beta1, t);
    double bc2 = 1.0 - std::pow(config.adam_beta2, t);
    double b1 = config.adam_beta1, b2 = config.adam_beta2;

    for (std::size_t a = 0; a < theta.size(); ++a) {
        if (theta[a].size() != g[a].size())
            throw ConfigError("adam_step: gradient shape mismatch");
        for (std::size_t i = 0; i < theta[a].size(); ++i) {
            double gi = g[a][i];
            m[a][i] = b1 * m[a][i] + (1.0 - b1) * gi;
            v[a][i] = b2 * v[a][i] + (1.0 - b2) * gi * gi;
            double m_hat = m[a][i] / bc1;
            double v_hat = v[a][i] / bc2;
            theta[a][i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_eps);
        }
    }
}

void sgd_step(ModelParams& params, const ModelParams& grads, double learning_rate) {
    auto theta = trainable_arrays(params);
    auto g = trainable_arrays(grads);
    if (theta.size() != g.size()) throw ConfigError("sgd_step: array count mismatch");
    for (std::size_t a = 0; a < theta.size(); ++a) {
        if (theta[a].size() != g[a].size())
            throw ConfigError("sgd_step: gradient shape mismatch");
        for (std::size_t i = 0; i < theta[a].size(); ++i)
            theta[a][i] -= learning_rate * g[a][i];
    }
}

double grad_check(const ModelParams& params, const Batch& batch, double l2_lambda,
                  double epsilon, std::uint64_t seed, std::size_t samples, double corrupt) {
    std::vector<std::vector<double>> no_masks;
    ModelParams analytic = gradients(params, batch, no_masks, l2_lambda);

    std::size_t total = parameter_count(params);
    std::vector<std::size_t> coords(total);
    std::iota(coords.begin(), coords.end(), 0);
    if (samples < total) {
        // partial Fisher-Yates: the first `samples` entries become a
        // uniform draw without replacement
        Rng rng(seed);
        for (std::size_t i = 0; i < samples; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
            std::swap(coords[i], coords[j]);
        }
        coords.resize(samples);
    }

    ModelParams probe = params;
    auto probe_arrays = trainable_arrays(probe);
    auto analytic_arrays = trainable_arrays(analytic);

    auto locate = [&](std::size_t flat) {
        std::size_t a = 0;
        while (flat >= probe_arrays[a].size()) {
            flat -= probe_arrays[a].size();
            ++a;
        }
        return std::pair<std::size_t, std::size_t>{a, flat};
    };

    double max_rel = 0;
    bool first = true;
    for (std::size_t flat : coords) {
        auto [a, i] = locate(flat);
        double saved = probe_arrays[a][i];
        probe_arrays[a][i] = saved + epsilon;
        double loss_plus = loss(probe, batch, no_masks, l2_lambda);
        probe_arrays[a][i] = saved - epsilon;
        double loss_minus = loss(probe, batch, no_masks, l2_lambda);
        probe_arrays[a][i] = saved;

        double numeric = (loss_plus - loss_minus) / (2.0 * epsilon);
        double exact = analytic_arrays[a][i];
        if (first && corrupt != 0.0) exact += corrupt;
        first = false;
        double rel = std::abs(exact - numeric)
                     / std::max({std::abs(exact), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

ConfusionMatrix evaluate(const ModelParams& params, const Corpus& corpus,
                         const EmbeddingTable& table, Variant variant) {
    if (corpus.examples.empty()) throw DataError("evaluation over an empty corpus");
    ConfusionMatrix cm;
    for (const Example& ex : corpus.examples) {
        SentenceMatrix x = embed_sentence(ex, table);
        std::vector<double> a = aspect_vector(ex, table);
        AttendedSentence s = attend(x, a, variant);
        Forward fw = forward(params, s);
        std::size_t pred = 0;
        for (std::size_t c = 1; c < 3; ++c)
            if (fw.probs[c] > fw.probs[pred]) pred = c;
        cm.add(ex.label, static_cast<Polarity>(pred));
    }
    return cm;
}

TrainResult train(const TrainConfig& config, const Corpus& train_corpus,
                  const Corpus& eval_corpus, const EmbeddingTable& table,
                  const EpochCallback& on_epoch) {
    config.validate();
    if (train_corpus.examples.empty()) throw DataError("training corpus is empty");
    if (eval_corpus.examples.empty()) throw DataError("evaluation corpus is empty");
    if (train_corpus.vocab.size() != eval_corpus.vocab.size()
        || train_corpus.maxlen != eval_corpus.maxlen)
        throw ConfigError("train and eval corpora must share vocab and maxlen");
    if (table.dim != config.dim)
        throw ConfigError("embedding table dim " + std::to_string(table.dim)
                          + " does not match config dim " + std::to_string(config.dim));
    if (table.matrix.rows() != train_corpus.vocab.size())
        throw ConfigError("embedding table does not cover the vocabulary");
    for (std::size_t k : config.widths)
        if (k > train_corpus.maxlen)
            throw ConfigError("filter width " + std::to_string(k) + " exceeds maxlen "
                              + std::to_string(train_corpus.maxlen));

    TrainResult result;
    result.params = ModelParams::init(config.widths, config.n_per_width, 2 * config.dim,
                                      derive_seed(config.seed, 0));
    AdamState adam = AdamState::zeros_like(result.params);
    Rng rng(derive_seed(config.seed, 1));

    std::size_t n = train_corpus.examples.size();
    std::size_t feature_dim = result.params.feature_dim();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    ModelParams grads = ModelParams::zeros_like(result.params);
    auto grad_arrays = trainable_arrays(grads);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        // Fisher-Yates with our own generator; std::shuffle is
        // implementation-defined
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(order[i], order[j]);
        }

        double loss_sum = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            std::size_t end = std::min(start + config.batch_size, n);
            Batch batch;
            batch.items.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                const Example& ex = train_corpus.examples[order[i]];
                SentenceMatrix x = embed_sentence(ex, table);
                std::vector<double> a = aspect_vector(ex, table);
                batch.items.push_back({attend(x, a, config.variant), one_hot(ex.label)});
            }
            std::vector<std::vector<double>> masks;
            if (config.keep_prob < 1.0) {
                masks.reserve(batch.items.size());
                for (std::size_t i = 0; i < batch.items.size(); ++i)
                    masks.push_back(dropout_mask(feature_dim, config.keep_prob, rng));
            }

            for (auto arr : grad_arrays) std::fill(arr.begin(), arr.end(), 0.0);
            double batch_loss =
                loss_and_gradients(result.params, batch, masks, config.l2_lambda, grads);
            if (!std::isfinite(batch_loss))
                throw NumericError("non-finite loss at epoch " + std::to_string(epoch)
                                   + ", batch " + std::to_string(start / config.batch_size + 1));
            adam_step(result.params, grads, adam, config);
            loss_sum += batch_loss * static_cast<double>(end - start);
        }

        ConfusionMatrix cm = evaluate(result.params, eval_corpus, table, config.variant);
        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_sum / static_cast<double>(n);
        stats.eval_accuracy = accuracy(cm);
        stats.eval_macro_f1 = macro_f1(cm);
        result.history.push_back(stats);
        if (on_epoch) on_epoch(stats);
    }
    return result;
}

}  // namespace acnn
