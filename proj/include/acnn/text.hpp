#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace acnn {

enum class Polarity : int { positive = 0, neutral = 1, negative = 2 };

inline constexpr int kNumClasses = 3;

const char* to_string(Polarity p);

// The placeholder that marks the aspect position inside a sentence line.
inline constexpr std::string_view kAspectPlaceholder = "$T$";

// One block of the three-line dataset format: a sentence containing the
// aspect placeholder exactly once, the aspect phrase, and the gold label.
struct RawInstance {
    std::string sentence_template;
    std::string aspect_text;
    Polarity label = Polarity::neutral;
};

// token <-> id map. Ids 0 and 1 are reserved for padding and unknown words
// and are never assigned to tokens coming out of the tokenizer.
class Vocab {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;

    Vocab();

    // id of `token`, allocating a fresh one if unseen
    int add(const std::string& token);
    // id of `token`, kUnk when absent
    int lookup(const std::string& token) const;

    const std::string& token(int id) const;
    const std::vector<std::string>& tokens() const { return id_to_token_; }
    std::size_t size() const { return id_to_token_.size(); }

    bool operator==(const Vocab& other) const { return id_to_token_ == other.id_to_token_; }

private:
    std::unordered_map<std::string, int> token_to_id_;
    std::vector<std::string> id_to_token_;
};

struct Example {
    std::vector<int> token_ids;   // length == corpus maxlen, PAD-filled tail
    std::size_t true_length = 0;  // count of non-PAD positions, >= 1
    std::vector<int> aspect_ids;  // never empty
    Polarity label = Polarity::neutral;
};

struct Corpus {
    std::vector<Example> examples;
    std::size_t maxlen = 0;
    Vocab vocab;
    std::size_t skipped = 0;  // instances dropped because cleaning emptied the sentence
};

// Parses the repeating 3-line block format (sentence with $T$, aspect
// phrase, label in {-1,0,1}). Throws DataError naming the offending block.
std::vector<RawInstance> parse_dataset(std::string_view raw_text);

// Inverse of parse_dataset, used for round-trip checks and sample data.
std::string format_dataset(const std::vector<RawInstance>& instances);

// The list shipped with the library. Common English function words;
// negators (not, no, never, ...) are deliberately absent.
const std::unordered_set<std::string>& default_stopwords();

// One token per line, '#' starts a comment.
std::unordered_set<std::string> load_stopwords(std::istream& in);

// lowercase, map every char outside [a-z] to a space, split on whitespace
std::vector<std::string> clean_tokens(std::string_view text);

// clean_tokens followed by stop-word removal; protected tokens survive the
// stop filter unconditionally.
std::vector<std::string> preprocess(std::string_view text,
                                    const std::unordered_set<std::string>& protected_tokens,
                                    const std::unordered_set<std::string>& stopwords
                                        = default_stopwords());

// Training split: vocabulary and maxlen are computed from the instances.
Corpus build_corpus(const std::vector<RawInstance>& instances,
                    const std::unordered_set<std::string>& stopwords = default_stopwords());

// Test split: vocabulary and maxlen come from the training corpus; unseen
// tokens map to UNK, longer sentences are cut at the end.
Corpus build_corpus(const std::vector<RawInstance>& instances, const Vocab& vocab,
                    std::size_t maxlen,
                    const std::unordered_set<std::string>& stopwords = default_stopwords());

struct ClassFractions {
    double positive = 0;
    double neutral = 0;
    double negative = 0;
};

ClassFractions class_distribution(const Corpus& corpus);

}  // namespace acnn
