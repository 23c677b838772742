#include "acnn/text.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "acnn/errors.hpp"

namespace acnn {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        pos = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    return lines;
}

std::size_t count_placeholder(std::string_view s) {
    std::size_t n = 0, pos = 0;
    while ((pos = s.find(kAspectPlaceholder, pos)) != std::string_view::npos) {
        ++n;
        pos += kAspectPlaceholder.size();
    }
    return n;
}

}  // namespace

const char* to_string(Polarity p) {
    switch (p) {
        case Polarity::positive: return "positive";
        case Polarity::neutral: return "neutral";
        case Polarity::negative: return "negative";
    }
    return "?";
}

Vocab::Vocab() {
    id_to_token_ = {"<pad>", "<unk>"};
    token_to_id_ = {{"<pad>", kPad}, {"<unk>", kUnk}};
}

int Vocab::add(const std::string& token) {
    auto it = token_to_id_.find(token);
    if (it != token_to_id_.end()) return it->second;
    int id = static_cast<int>(id_to_token_.size());
    token_to_id_.emplace(token, id);
    id_to_token_.push_back(token);
    return id;
}

int Vocab::lookup(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size())
        throw std::out_of_range("vocab id " + std::to_string(id) + " out of range");
    return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<RawInstance> parse_dataset(std::string_view raw_text) {
    std::vector<std::string> lines = split_lines(raw_text);
    if (lines.size() % 3 != 0) {
        throw DataError("dataset line count " + std::to_string(lines.size())
                        + " is not a multiple of 3 (block "
                        + std::to_string(lines.size() / 3 + 1) + " is incomplete)");
    }
    std::vector<RawInstance> out;
    out.reserve(lines.size() / 3);
    for (std::size_t i = 0; i < lines.size(); i += 3) {
        std::size_t block = i / 3 + 1;
        RawInstance inst;
        inst.sentence_template = std::string(trim(lines[i]));
        inst.aspect_text = std::string(trim(lines[i + 1]));
        std::size_t n_ph = count_placeholder(inst.sentence_template);
        if (n_ph != 1) {
            throw DataError("block " + std::to_string(block) + ": sentence has "
                            + std::to_string(n_ph) + " aspect placeholders, expected 1");
        }
        if (inst.aspect_text.empty()) {
            throw DataError("block " + std::to_string(block) + ": empty aspect phrase");
        }
        std::string_view label = trim(lines[i + 2]);
        if (label == "1") {
            inst.label = Polarity::positive;
        } else if (label == "0") {
            inst.label = Polarity::neutral;
        } else if (label == "-1") {
            inst.label = Polarity::negative;
        } else {
            throw DataError("block " + std::to_string(block) + ": label '"
                            + std::string(label) + "' is not one of -1, 0, 1");
        }
        out.push_back(std::move(inst));
    }
    return out;
}

std::string format_dataset(const std::vector<RawInstance>& instances) {
    std::string out;
    for (const RawInstance& inst : instances) {
        out += inst.sentence_template;
        out += '\n';
        out += inst.aspect_text;
        out += '\n';
        switch (inst.label) {
            case Polarity::positive: out += "1"; break;
            case Polarity::neutral: out += "0"; break;
            case Polarity::negative: out += "-1"; break;
        }
        out += '\n';
    }
    return out;
}

std::unordered_set<std::string> load_stopwords(std::istream& in) {
    if (!in) throw DataError("cannot read stop-word list");
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string_view tok = trim(line);
        if (tok.empty()) continue;
        std::string lowered(tok);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        words.insert(std::move(lowered));
    }
    return words;
}

std::vector<std::string> clean_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char raw : text) {
        unsigned char c = static_cast<unsigned char>(raw);
        char lower = static_cast<char>(std::tolower(c));
        if (lower >= 'a' && lower <= 'z') {
            current.push_back(lower);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> preprocess(std::string_view text,
                                    const std::unordered_set<std::string>& protected_tokens,
                                    const std::unordered_set<std::string>& stopwords) {
    std::vector<std::string> tokens = clean_tokens(text);
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (std::string& tok : tokens) {
        if (protected_tokens.contains(tok) || !stopwords.contains(tok))
            kept.push_back(std::move(tok));
    }
    return kept;
}

namespace {

struct CleanedInstance {
    std::vector<std::string> sentence;
    std::vector<std::string> aspect;
    Polarity label;
};

// substitute the aspect phrase for the placeholder, then tokenize with the
// aspect's own tokens protected from stop-word removal
std::vector<CleanedInstance> clean_instances(const std::vector<RawInstance>& instances,
                                             const std::unordered_set<std::string>& stopwords,
                                             std::size_t& skipped) {
    std::vector<CleanedInstance> out;
    out.reserve(instances.size());
    skipped = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const RawInstance& inst = instances[i];
        CleanedInstance cleaned;
        cleaned.aspect = clean_tokens(inst.aspect_text);
        if (cleaned.aspect.empty()) {
            throw DataError("instance " + std::to_string(i + 1) + ": aspect '"
                            + inst.aspect_text + "' is empty after cleaning");
        }
        std::unordered_set<std::string> protected_tokens(cleaned.aspect.begin(),
                                                         cleaned.aspect.end());
        std::string sentence = inst.sentence_template;
        std::size_t at = sentence.find(kAspectPlaceholder);
        if (at != std::string::npos)
            sentence.replace(at, kAspectPlaceholder.size(), inst.aspect_text);
        cleaned.sentence = preprocess(sentence, protected_tokens, stopwords);
        if (cleaned.sentence.empty()) {
            ++skipped;
            continue;
        }
        cleaned.label = inst.label;
        out.push_back(std::move(cleaned));
    }
    return out;
}

Example encode(const CleanedInstance& cleaned, Vocab& vocab, std::size_t maxlen,
               bool allocate) {
    Example ex;
    ex.label = cleaned.label;
    ex.true_length = std::min(cleaned.sentence.size(), maxlen);
    ex.token_ids.assign(maxlen, Vocab::kPad);
    for (std::size_t i = 0; i < ex.true_length; ++i) {
        ex.token_ids[i] = allocate ? vocab.add(cleaned.sentence[i])
                                   : vocab.lookup(cleaned.sentence[i]);
    }
    ex.aspect_ids.reserve(cleaned.aspect.size());
    for (const std::string& tok : cleaned.aspect)
        ex.aspect_ids.push_back(allocate ? vocab.add(tok) : vocab.lookup(tok));
    return ex;
}

}  // namespace

Corpus build_corpus(const std::vector<RawInstance>& instances,
                    const std::unordered_set<std::string>& stopwords) {
    Corpus corpus;
    std::vector<CleanedInstance> cleaned = clean_instances(instances, stopwords, corpus.skipped);
    for (const CleanedInstance& c : cleaned)
        corpus.maxlen = std::max(corpus.maxlen, c.sentence.size());
    corpus.examples.reserve(cleaned.size());
    for (const CleanedInstance& c : cleaned)
        corpus.examples.push_back(encode(c, corpus.vocab, corpus.maxlen, /*allocate=*/true));
    return corpus;
}

Corpus build_corpus(const std::vector<RawInstance>& instances, const Vocab& vocab,
                    std::size_t maxlen, const std::unordered_set<std::string>& stopwords) {
    if (maxlen == 0) throw ConfigError("maxlen must be positive");
    Corpus corpus;
    corpus.vocab = vocab;
    corpus.maxlen = maxlen;
    std::vector<CleanedInstance> cleaned = clean_instances(instances, stopwords, corpus.skipped);
    corpus.examples.reserve(cleaned.size());
    for (const CleanedInstance& c : cleaned)
        corpus.examples.push_back(encode(c, corpus.vocab, maxlen, /*allocate=*/false));
    return corpus;
}

ClassFractions class_distribution(const Corpus& corpus) {
    if (corpus.examples.empty()) throw DataError("class distribution of an empty corpus");
    double n = static_cast<double>(corpus.examples.size());
    ClassFractions f;
    for (const Example& ex : corpus.examples) {
        switch (ex.label) {
            case Polarity::positive: f.positive += 1; break;
            case Polarity::neutral: f.neutral += 1; break;
            case Polarity::negative: f.negative += 1; break;
        }
    }
    f.positive /= n;
    f.neutral /= n;
    f.negative /= n;
    return f;
}

}  // namespace acnn
