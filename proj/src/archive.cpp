#include "acnn/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "acnn/errors.hpp"

namespace acnn {

namespace {

constexpr std::string_view kMagic = "ACNN1";

void write_f64(std::ostream& out, double value) {
    auto bits = std::bit_cast<std::uint64_t>(value);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

double read_f64(std::istream& in) {
    char bytes[8];
    in.read(bytes, 8);
    if (in.gcount() != 8) throw DataError("archive truncated inside the parameter payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    return std::bit_cast<double>(bits);
}

void write_array(std::ostream& out, std::span<const double> values) {
    for (double v : values) write_f64(out, v);
}

void read_array(std::istream& in, std::span<double> values) {
    for (double& v : values) v = read_f64(in);
}

std::string header_value(const std::string& header, const std::string& key) {
    std::string needle = " " + key + "=";
    std::size_t at = header.find(needle);
    if (at == std::string::npos) throw DataError("archive header is missing '" + key + "'");
    std::size_t start = at + needle.size();
    std::size_t end = header.find(' ', start);
    if (end == std::string::npos) end = header.size();
    return header.substr(start, end - start);
}

std::size_t parse_size(const std::string& s, const std::string& key) {
    try {
        return static_cast<std::size_t>(std::stoull(s));
    } catch (const std::exception&) {
        throw DataError("archive header has a malformed '" + key + "' value: " + s);
    }
}

}  // namespace

void save_archive(const ModelArchive& archive, std::ostream& out) {
    out << kMagic << " variant=" << to_string(archive.variant) << " dim=" << archive.dim
        << " maxlen=" << archive.maxlen << " widths=";
    for (std::size_t i = 0; i < archive.widths.size(); ++i) {
        if (i) out << ',';
        out << archive.widths[i];
    }
    out << " filters_per_width=" << archive.n_per_width << " vocab=" << archive.vocab.size()
        << "\n";

    for (const std::string& tok : archive.vocab.tokens()) out << tok << "\n";
    out << "\n";

    write_array(out, archive.table.matrix.data());
    for (const FilterBank& bank : archive.params.banks) write_array(out, bank.weights.data());
    for (const FilterBank& bank : archive.params.banks) write_array(out, bank.biases);
    write_array(out, archive.params.softmax_w.data());
    write_array(out, archive.params.softmax_b);
    if (!out) throw DataError("failed writing archive");
}

void save_archive(const ModelArchive& archive, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    save_archive(archive, out);
}

ModelArchive load_archive(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw DataError("archive is empty");
    if (header.substr(0, kMagic.size()) != kMagic
        || (header.size() > kMagic.size() && header[kMagic.size()] != ' '))
        throw DataError("not an " + std::string(kMagic) + " archive (version mismatch?)");

    ModelArchive archive;
    std::string variant = header_value(header, "variant");
    if (variant == "atten1") {
        archive.variant = Variant::atten_emb1;
    } else if (variant == "atten2") {
        archive.variant = Variant::atten_emb2;
    } else {
        throw DataError("archive names unknown variant '" + variant + "'");
    }
    archive.dim = parse_size(header_value(header, "dim"), "dim");
    archive.maxlen = parse_size(header_value(header, "maxlen"), "maxlen");
    archive.n_per_width =
        parse_size(header_value(header, "filters_per_width"), "filters_per_width");
    std::size_t vocab_size = parse_size(header_value(header, "vocab"), "vocab");

    std::stringstream widths(header_value(header, "widths"));
    std::string field;
    while (std::getline(widths, field, ','))
        archive.widths.push_back(parse_size(field, "widths"));
    if (archive.widths.empty()) throw DataError("archive lists no filter widths");

    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) break;
        tokens.push_back(line);
    }
    if (tokens.size() != vocab_size)
        throw DataError("archive vocabulary has " + std::to_string(tokens.size())
                        + " entries, header says " + std::to_string(vocab_size));
    if (tokens.size() < 2 || tokens[0] != "<pad>" || tokens[1] != "<unk>")
        throw DataError("archive vocabulary is missing the reserved entries");
    for (std::size_t i = 2; i < tokens.size(); ++i) archive.vocab.add(tokens[i]);
    if (archive.vocab.size() != vocab_size)
        throw DataError("archive vocabulary contains duplicate tokens");

    archive.table.dim = archive.dim;
    archive.table.matrix = Matrix(vocab_size, archive.dim);
    archive.table.pretrained.assign(vocab_size, false);
    read_array(in, std::span<double>(archive.table.matrix.data()));

    archive.params.input_width = 2 * archive.dim;
    for (std::size_t k : archive.widths) {
        FilterBank bank;
        bank.width = k;
        bank.weights = Matrix(archive.n_per_width, k * 2 * archive.dim);
        bank.biases.assign(archive.n_per_width, 0.0);
        archive.params.banks.push_back(std::move(bank));
    }
    std::size_t feature_dim = archive.n_per_width * archive.widths.size();
    archive.params.softmax_w = Matrix(feature_dim, 3);
    archive.params.softmax_b.assign(3, 0.0);

    for (FilterBank& bank : archive.params.banks)
        read_array(in, std::span<double>(bank.weights.data()));
    for (FilterBank& bank : archive.params.banks) read_array(in, bank.biases);
    read_array(in, std::span<double>(archive.params.softmax_w.data()));
    read_array(in, archive.params.softmax_b);

    char extra;
    if (in.read(&extra, 1).gcount() != 0)
        throw DataError("archive has trailing bytes after the parameter payload");
    return archive;
}

ModelArchive load_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open archive '" + path + "'");
    return load_archive(in);
}

}  // namespace acnn
