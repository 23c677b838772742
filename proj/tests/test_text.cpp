#include <doctest.h>

#include <fstream>
#include <sstream>

#include "acnn/errors.hpp"
#include "acnn/pipeline.hpp"
#include "acnn/text.hpp"

using namespace acnn;

TEST_CASE("parse_dataset reads 3-line blocks") {
    auto instances = parse_dataset("this $T$ is amazing\npicture quality\n1");
    REQUIRE(instances.size() == 1);
    CHECK(instances[0].sentence_template == "this $T$ is amazing");
    CHECK(instances[0].aspect_text == "picture quality");
    CHECK(instances[0].label == Polarity::positive);

    CHECK(parse_dataset("").empty());
    CHECK(parse_dataset("a $T$ b\nc\n-1\n\n\n").size() == 1);  // trailing blanks stripped

    auto all = parse_dataset("x $T$\na\n1\ny $T$\nb\n0\nz $T$\nc\n-1");
    REQUIRE(all.size() == 3);
    CHECK(all[1].label == Polarity::neutral);
    CHECK(all[2].label == Polarity::negative);
}

TEST_CASE("parse_dataset rejects malformed input") {
    CHECK_THROWS_WITH_AS(parse_dataset("a $T$ b\nc\n1\nleftover"),
                         doctest::Contains("block 2"), DataError);
    CHECK_THROWS_WITH_AS(parse_dataset("a $T$ b\nc\n2"), doctest::Contains("label"), DataError);
    CHECK_THROWS_WITH_AS(parse_dataset("no placeholder here\nc\n1"),
                         doctest::Contains("placeholder"), DataError);
    CHECK_THROWS_AS(parse_dataset("two $T$ and $T$\nc\n1"), DataError);
    CHECK_THROWS_AS(parse_dataset("a $T$ b\n   \n1"), DataError);  // blank aspect
}

TEST_CASE("parse then format reproduces the sample file") {
    std::string text = read_file("data/sample/train.raw");
    auto instances = parse_dataset(text);
    CHECK(instances.size() == 48);
    CHECK(format_dataset(instances) == text);
    // and the round trip through parse again is lossless
    auto reparsed = parse_dataset(format_dataset(instances));
    REQUIRE(reparsed.size() == instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) {
        CHECK(reparsed[i].sentence_template == instances[i].sentence_template);
        CHECK(reparsed[i].aspect_text == instances[i].aspect_text);
        CHECK(reparsed[i].label == instances[i].label);
    }

    // trailing whitespace and CRLF endings normalise away
    auto messy = parse_dataset("a $T$ b \r\nc\t\n1 \r\n");
    CHECK(format_dataset(messy) == "a $T$ b\nc\n1\n");
}

TEST_CASE("preprocess cleans, lowercases and drops stop words") {
    std::unordered_set<std::string> stop{"the", "is"};
    CHECK(preprocess("The picture quality is amazing!!! 123", {}, stop)
          == std::vector<std::string>{"picture", "quality", "amazing"});
    CHECK(preprocess("", {}, stop).empty());
    CHECK(preprocess("It IS good", {"is"}) == std::vector<std::string>{"is", "good"});
    // default list agrees with the explicit one on the first example
    CHECK(preprocess("The picture quality is amazing!!! 123", {})
          == std::vector<std::string>{"picture", "quality", "amazing"});
}

TEST_CASE("preprocess is idempotent on its own output") {
    std::string text = read_file("data/sample/train.raw");
    for (const RawInstance& inst : parse_dataset(text)) {
        auto aspect = clean_tokens(inst.aspect_text);
        std::unordered_set<std::string> protected_tokens(aspect.begin(), aspect.end());
        std::string sentence = inst.sentence_template;
        sentence.replace(sentence.find(kAspectPlaceholder), kAspectPlaceholder.size(),
                         inst.aspect_text);
        auto once = preprocess(sentence, protected_tokens);
        std::string joined;
        for (const auto& tok : once) joined += tok + " ";
        CHECK(preprocess(joined, protected_tokens) == once);
    }
}

TEST_CASE("tokenizer never emits the reserved strings") {
    CHECK(clean_tokens("<pad> <unk>") == std::vector<std::string>{"pad", "unk"});
}

TEST_CASE("vocab reserves pad and unk") {
    Vocab v;
    CHECK(v.size() == 2);
    CHECK(v.token(Vocab::kPad) == "<pad>");
    CHECK(v.token(Vocab::kUnk) == "<unk>");
    CHECK(v.add("word") == 2);
    CHECK(v.add("word") == 2);
    CHECK(v.lookup("word") == 2);
    CHECK(v.lookup("missing") == Vocab::kUnk);
    CHECK_THROWS_AS(v.token(99), std::out_of_range);
}

namespace {

RawInstance make_instance(const std::string& words, const std::string& aspect, Polarity label) {
    return RawInstance{"$T$ " + words, aspect, label};
}

}  // namespace

TEST_CASE("build_corpus computes maxlen from the training split") {
    std::unordered_set<std::string> no_stop;
    std::vector<RawInstance> instances{
        make_instance("alpha beta", "anchor", Polarity::positive),           // 3 tokens
        make_instance("one two three four five six", "core", Polarity::neutral),  // 7
        make_instance("red green blue white", "frame", Polarity::negative),  // 5
    };
    Corpus corpus = build_corpus(instances, no_stop);
    CHECK(corpus.maxlen == 7);
    REQUIRE(corpus.examples.size() == 3);
    const Example& shortest = corpus.examples[0];
    CHECK(shortest.true_length == 3);
    CHECK(shortest.token_ids.size() == 7);
    for (std::size_t i = 3; i < 7; ++i) CHECK(shortest.token_ids[i] == Vocab::kPad);
    for (std::size_t i = 0; i < 3; ++i) CHECK(shortest.token_ids[i] != Vocab::kPad);
}

TEST_CASE("test split truncates at the end and maps unseen tokens to UNK") {
    std::unordered_set<std::string> no_stop;
    Corpus train = build_corpus({make_instance("a b c d e f", "core", Polarity::neutral)},
                                no_stop);
    CHECK(train.maxlen == 7);

    std::vector<RawInstance> test_instances{
        make_instance("a b c d e f g h i", "core", Polarity::positive),  // 10 tokens
        make_instance("zz qq", "novel", Polarity::negative),
    };
    Corpus test = build_corpus(test_instances, train.vocab, train.maxlen, no_stop);
    REQUIRE(test.examples.size() == 2);
    CHECK(test.examples[0].true_length == 7);
    for (int id : test.examples[0].token_ids) CHECK(id != Vocab::kPad);
    // unseen sentence and aspect tokens fall back to UNK
    CHECK(test.examples[1].token_ids[1] == Vocab::kUnk);
    CHECK(test.examples[1].aspect_ids == std::vector<int>{Vocab::kUnk});
    // vocabulary is not extended by the test split
    CHECK(test.vocab.size() == train.vocab.size());
}

TEST_CASE("instances cleaning to empty are skipped, empty aspects are fatal") {
    // without a placeholder nothing is substituted, so the sentence can
    // clean to nothing; such instances are skipped with a count
    Corpus skipped = build_corpus({{"12345 !!!", "gadget", Polarity::neutral},
                                   make_instance("keep these words", "ok", Polarity::positive)});
    CHECK(skipped.skipped == 1);
    CHECK(skipped.examples.size() == 1);

    // an aspect that cleans to nothing has no aspect vector: hard error
    CHECK_THROWS_AS(build_corpus({{"$T$ nice", "12345", Polarity::positive}}), DataError);

    // via the placeholder the protected aspect always survives, so even a
    // sentence of pure stop words still encodes
    Corpus kept = build_corpus({{"the $T$ is it", "gadget", Polarity::neutral}});
    CHECK(kept.skipped == 0);
    REQUIRE(kept.examples.size() == 1);
    CHECK(kept.examples[0].true_length == 1);
}

TEST_CASE("round trip: decode then re-encode reproduces token ids") {
    Corpus corpus = build_corpus(parse_dataset(read_file("data/sample/train.raw")));
    for (const Example& ex : corpus.examples) {
        CHECK(ex.token_ids.size() == corpus.maxlen);
        CHECK(ex.true_length >= 1);
        for (std::size_t i = 0; i < ex.token_ids.size(); ++i) {
            int id = ex.token_ids[i];
            CHECK(id >= 0);
            CHECK(static_cast<std::size_t>(id) < corpus.vocab.size());
            CHECK((i >= ex.true_length) == (id == Vocab::kPad));
            if (i < ex.true_length)
                CHECK(corpus.vocab.lookup(corpus.vocab.token(id)) == id);
        }
    }
}

TEST_CASE("class_distribution") {
    std::unordered_set<std::string> no_stop;
    Corpus one = build_corpus({make_instance("nice thing", "core", Polarity::positive)}, no_stop);
    ClassFractions f = class_distribution(one);
    CHECK(f.positive == 1.0);
    CHECK(f.neutral == 0.0);
    CHECK(f.negative == 0.0);

    Corpus sample = build_corpus(parse_dataset(read_file("data/sample/train.raw")));
    ClassFractions sf = class_distribution(sample);
    CHECK(sf.positive + sf.neutral + sf.negative == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sf.neutral > sf.positive);

    CHECK_THROWS_AS(class_distribution(Corpus{}), DataError);
}

TEST_CASE("stop-word file matches the built-in list") {
    std::ifstream in("data/stopwords.txt");
    REQUIRE(in.good());
    auto from_file = load_stopwords(in);
    CHECK(from_file == default_stopwords());
    CHECK(default_stopwords().size() > 100);
    CHECK(default_stopwords().contains("the"));
    CHECK(default_stopwords().contains("is"));
    CHECK(default_stopwords().contains("it"));
    // negators stay out of the list
    for (const char* negator : {"not", "no", "never", "nor", "neither"})
        CHECK(!default_stopwords().contains(negator));
}

TEST_CASE("load_stopwords handles comments and case") {
    std::istringstream in("# header\nThe\n\nis # inline\n");
    auto words = load_stopwords(in);
    CHECK(words == std::unordered_set<std::string>{"the", "is"});
}
