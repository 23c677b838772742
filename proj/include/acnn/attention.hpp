#pragma once

#include <span>
#include <vector>

#include "acnn/embedding.hpp"

namespace acnn {

// The two aspect-aware input encodings. Both widen each word vector from d
// to 2d: the first appends the attention-rescaled word vector, the second
// appends the aspect vector itself.
enum class Variant : int { atten_emb1 = 1, atten_emb2 = 2 };

const char* to_string(Variant v);

// u.v / (|u||v|); 0 when either vector is zero.
double cosine(std::span<const double> u, std::span<const double> v);

// Numerically stable softmax (max subtraction).
std::vector<double> softmax(std::span<const double> scores);

// Per-word relevance against the aspect vector. Only the first true_length
// positions participate; PAD rows take no attention mass.
struct AttentionWeights {
    std::vector<double> scores;   // cosine per valid position, each in [-1, 1]
    std::vector<double> weights;  // softmax of scores, sums to 1
};

AttentionWeights attention_weights(const SentenceMatrix& x, std::span<const double> aspect);

struct AttendedSentence {
    Matrix rows;  // maxlen x 2d, PAD rows fully zero
    std::size_t true_length = 0;
    Variant variant = Variant::atten_emb1;
};

// row i = [x_i ; A_i * x_i]
AttendedSentence atten_emb1(const SentenceMatrix& x, std::span<const double> aspect);

// row i = [x_i ; a]
AttendedSentence atten_emb2(const SentenceMatrix& x, std::span<const double> aspect);

AttendedSentence attend(const SentenceMatrix& x, std::span<const double> aspect, Variant v);

}  // namespace acnn
