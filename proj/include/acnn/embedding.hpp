#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "acnn/matrix.hpp"
#include "acnn/text.hpp"

namespace acnn {

// Vocabulary-indexed word vectors. Row 0 (PAD) is all zeros; rows absent
// from the pretrained file are drawn uniformly from [-0.25, 0.25] with a
// per-token seed, so initialisation does not depend on iteration order.
struct EmbeddingTable {
    Matrix matrix;                 // |vocab| x dim
    std::size_t dim = 0;
    std::vector<bool> pretrained;  // row was copied from the vector file
    std::size_t skipped_lines = 0; // malformed lines in the vector file
};

// Reads GloVe-style text ("token v1 ... vd" per line). Lines whose vector
// has the wrong dimension are skipped and counted; if every line is
// malformed the dimension is taken to be misconfigured.
EmbeddingTable load_pretrained(std::istream& vectors, const Vocab& vocab, std::size_t dim,
                               std::uint64_t seed);

// The sentence as an L x d matrix; rows past true_length are zero.
struct SentenceMatrix {
    Matrix rows;
    std::size_t true_length = 0;
};

SentenceMatrix embed_sentence(const Example& example, const EmbeddingTable& table);

// Mean of the aspect-token rows.
std::vector<double> aspect_vector(const Example& example, const EmbeddingTable& table);

}  // namespace acnn
