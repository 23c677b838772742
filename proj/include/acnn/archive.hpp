#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "acnn/attention.hpp"
#include "acnn/embedding.hpp"
#include "acnn/model.hpp"
#include "acnn/text.hpp"

namespace acnn {

// Everything needed to run the model on new text, stored as a single file:
//   line 1            "ACNN1 variant=... dim=... maxlen=... widths=...
//                      filters_per_width=... vocab=..."
//   next |vocab| lines  one token per line, id order, then one blank line
//   payload           raw little-endian float64 arrays: embedding table,
//                      per-width filter weights, per-width filter biases,
//                      softmax weights, softmax bias
struct ModelArchive {
    std::size_t dim = 0;
    std::size_t maxlen = 0;
    std::size_t n_per_width = 0;
    std::vector<std::size_t> widths;
    Variant variant = Variant::atten_emb2;
    Vocab vocab;
    EmbeddingTable table;
    ModelParams params;
};

void save_archive(const ModelArchive& archive, std::ostream& out);
void save_archive(const ModelArchive& archive, const std::string& path);

ModelArchive load_archive(std::istream& in);
ModelArchive load_archive(const std::string& path);

}  // namespace acnn
