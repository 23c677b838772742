#include "acnn/attention.hpp"

#include <algorithm>
#include <cmath>

#include "acnn/errors.hpp"

namespace acnn {

const char* to_string(Variant v) {
    return v == Variant::atten_emb1 ? "atten1" : "atten2";
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw ConfigError("cosine: dimension mismatch");
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> out(scores.size());
    double hi = *std::max_element(scores.begin(), scores.end());
    double sum = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = std::exp(scores[i] - hi);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

AttentionWeights attention_weights(const SentenceMatrix& x, std::span<const double> aspect) {
    if (x.true_length == 0) throw ConfigError("attention over an empty sentence");
    AttentionWeights aw;
    aw.scores.resize(x.true_length);
    for (std::size_t i = 0; i < x.true_length; ++i)
        aw.scores[i] = cosine(x.rows.row(i), aspect);
    // the scores feed softmax unchanged
    aw.weights = softmax(aw.scores);
    return aw;
}

AttendedSentence atten_emb1(const SentenceMatrix& x, std::span<const double> aspect) {
    AttentionWeights aw = attention_weights(x, aspect);
    std::size_t d = x.rows.cols();
    AttendedSentence out;
    out.variant = Variant::atten_emb1;
    out.true_length = x.true_length;
    out.rows = Matrix(x.rows.rows(), 2 * d);
    for (std::size_t i = 0; i < x.true_length; ++i) {
        auto src = x.rows.row(i);
        auto dst = out.rows.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            dst[j] = src[j];
            dst[d + j] = aw.weights[i] * src[j];
        }
    }
    return out;
}

AttendedSentence atten_emb2(const SentenceMatrix& x, std::span<const double> aspect) {
    if (x.true_length == 0) throw ConfigError("attention over an empty sentence");
    std::size_t d = x.rows.cols();
    if (aspect.size() != d) throw ConfigError("aspect dimension mismatch");
    AttendedSentence out;
    out.variant = Variant::atten_emb2;
    out.true_length = x.true_length;
    out.rows = Matrix(x.rows.rows(), 2 * d);
    // the aspect half is masked at PAD positions so windows over pure
    // padding stay zero
    for (std::size_t i = 0; i < x.true_length; ++i) {
        auto src = x.rows.row(i);
        auto dst = out.rows.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            dst[j] = src[j];
            dst[d + j] = aspect[j];
        }
    }
    return out;
}

AttendedSentence attend(const SentenceMatrix& x, std::span<const double> aspect, Variant v) {
    return v == Variant::atten_emb1 ? atten_emb1(x, aspect) : atten_emb2(x, aspect);
}

}  // namespace acnn
