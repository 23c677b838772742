#include "acnn/embedding.hpp"

#include <charconv>
#include <istream>
#include <string>

#include "acnn/errors.hpp"
#include "acnn/rng.hpp"

namespace acnn {

namespace {

// splits `line` on runs of spaces/tabs; returns the token and field spans
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool parse_double(std::string_view s, double& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

void fill_random_row(Matrix& m, std::size_t row, std::uint64_t seed, std::uint64_t token_id) {
    Rng rng(derive_seed(seed, token_id));
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = rng.uniform(-0.25, 0.25);
}

}  // namespace

EmbeddingTable load_pretrained(std::istream& vectors, const Vocab& vocab, std::size_t dim,
                               std::uint64_t seed) {
    if (dim == 0) throw ConfigError("embedding dimension must be positive");
    if (vectors.bad()) throw DataError("cannot read vector file");

    EmbeddingTable table;
    table.dim = dim;
    table.matrix = Matrix(vocab.size(), dim);
    table.pretrained.assign(vocab.size(), false);

    // PAD stays zero; everything else starts from the seeded distribution
    // and is overwritten below when the file provides a vector.
    for (std::size_t id = 1; id < vocab.size(); ++id)
        fill_random_row(table.matrix, id, seed, id);

    std::size_t total_lines = 0;
    std::string line;
    while (std::getline(vectors, line)) {
        std::vector<std::string_view> fields = split_fields(line);
        if (fields.empty()) continue;
        ++total_lines;
        if (fields.size() != dim + 1) {
            ++table.skipped_lines;
            continue;
        }
        int id = vocab.lookup(std::string(fields[0]));
        // reserved rows never take file vectors; first occurrence wins
        if (id < 2 || table.pretrained[static_cast<std::size_t>(id)]) continue;
        std::vector<double> values(dim);
        bool ok = true;
        for (std::size_t j = 0; j < dim && ok; ++j)
            ok = parse_double(fields[j + 1], values[j]);
        if (!ok) {
            ++table.skipped_lines;
            continue;
        }
        for (std::size_t j = 0; j < dim; ++j)
            table.matrix(static_cast<std::size_t>(id), j) = values[j];
        table.pretrained[static_cast<std::size_t>(id)] = true;
    }
    if (total_lines > 0 && table.skipped_lines == total_lines) {
        throw ConfigError("every line in the vector file has the wrong dimension (expected "
                          + std::to_string(dim) + ")");
    }
    return table;
}

SentenceMatrix embed_sentence(const Example& example, const EmbeddingTable& table) {
    SentenceMatrix out;
    out.true_length = example.true_length;
    out.rows = Matrix(example.token_ids.size(), table.dim);
    for (std::size_t i = 0; i < example.token_ids.size(); ++i) {
        int id = example.token_ids[i];
        if (id < 0 || static_cast<std::size_t>(id) >= table.matrix.rows())
            throw std::out_of_range("token id " + std::to_string(id)
                                    + " outside the embedding table");
        auto src = table.matrix.row(static_cast<std::size_t>(id));
        auto dst = out.rows.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

std::vector<double> aspect_vector(const Example& example, const EmbeddingTable& table) {
    if (example.aspect_ids.empty()) throw ConfigError("aspect_ids must not be empty");
    std::vector<double> mean(table.dim, 0.0);
    for (int id : example.aspect_ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= table.matrix.rows())
            throw std::out_of_range("aspect id " + std::to_string(id)
                                    + " outside the embedding table");
        auto row = table.matrix.row(static_cast<std::size_t>(id));
        for (std::size_t j = 0; j < table.dim; ++j) mean[j] += row[j];
    }
    double inv = 1.0 / static_cast<double>(example.aspect_ids.size());
    for (double& v : mean) v *= inv;
    return mean;
}

}  // namespace acnn
