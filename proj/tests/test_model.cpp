#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "acnn/errors.hpp"
#include "acnn/model.hpp"

using namespace acnn;

namespace {

AttendedSentence attended(const std::vector<std::vector<double>>& rows, std::size_t maxlen,
                          std::size_t true_length) {
    AttendedSentence s;
    s.true_length = true_length;
    s.rows = Matrix(maxlen, rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), s.rows.row(i).begin());
    return s;
}

AttendedSentence random_attended(Rng& rng, std::size_t maxlen, std::size_t true_length,
                                 std::size_t width) {
    AttendedSentence s;
    s.true_length = true_length;
    s.rows = Matrix(maxlen, width);
    for (std::size_t i = 0; i < true_length; ++i)
        for (double& v : s.rows.row(i)) v = rng.uniform(-1, 1);
    return s;
}

}  // namespace

TEST_CASE("window concatenates consecutive rows") {
    AttendedSentence s = attended({{1, 2}, {3, 4}, {5, 6}}, 3, 3);
    CHECK(window(s, 0, 2) == std::vector<double>{1, 2, 3, 4});
    CHECK(window(s, 1, 2) == std::vector<double>{3, 4, 5, 6});
    CHECK(window(s, 1, 1) == std::vector<double>{3, 4});
    CHECK_THROWS_AS(window(s, 1, 3), std::out_of_range);
}

TEST_CASE("conv_feature_map") {
    SUBCASE("direct arithmetic, width one") {
        AttendedSentence s = attended({{2}}, 1, 1);
        ConvFilter f{1, {3}, -1};
        CHECK(conv_feature_map(s, f) == std::vector<double>{5});
    }
    SUBCASE("ReLU clamps negative pre-activations") {
        AttendedSentence s = attended({{2}}, 1, 1);
        ConvFilter f{1, {-3}, 4};  // pre = -2
        CHECK(conv_feature_map(s, f) == std::vector<double>{0});
    }
    SUBCASE("map length is L - k + 1") {
        Rng rng(1);
        AttendedSentence s = random_attended(rng, 8, 5, 2);
        ConvFilter f{3, std::vector<double>(6, 0.1), 0};
        CHECK(conv_feature_map(s, f).size() == 3);
    }
    SUBCASE("sentences shorter than the filter use one overlap window") {
        AttendedSentence s = attended({{1, 1}}, 4, 1);
        ConvFilter f{3, std::vector<double>(6, 1.0), 0};
        auto map = conv_feature_map(s, f);
        REQUIRE(map.size() == 1);
        CHECK(map[0] == 2.0);  // PAD rows contribute zeros
    }
    SUBCASE("filter wider than the padded sentence is a configuration error") {
        AttendedSentence s = attended({{1}}, 2, 1);
        ConvFilter f{3, std::vector<double>(3, 1.0), 0};
        CHECK_THROWS_AS(conv_feature_map(s, f), ConfigError);
    }
}

TEST_CASE("ReLU positive homogeneity with zero bias") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t iw = 1 + rng.below(5);
        std::size_t k = 1 + rng.below(3);
        std::size_t maxlen = k + rng.below(4);
        std::size_t len = 1 + rng.below(maxlen);
        AttendedSentence s = random_attended(rng, maxlen, len, iw);
        ConvFilter f{k, std::vector<double>(k * iw), 0.0};
        for (double& w : f.weights) w = rng.uniform(-1, 1);

        auto base = conv_feature_map(s, f);
        for (double alpha : {0.0, 0.5, 2.0}) {
            AttendedSentence scaled = s;
            for (double& v : scaled.rows.data()) v *= alpha;
            auto map = conv_feature_map(scaled, f);
            REQUIRE(map.size() == base.size());
            for (std::size_t j = 0; j < map.size(); ++j)
                CHECK(map[j] == doctest::Approx(alpha * base[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("max_pool") {
    CHECK(max_pool(std::vector<double>{1, 3, 2}) == 3);
    CHECK(max_pool(std::vector<double>{0, 0, 0}) == 0);
    CHECK_THROWS_AS(max_pool(std::vector<double>{}), ConfigError);

    Rng rng(8);
    std::vector<double> map(17);
    for (double& v : map) v = rng.uniform(0, 5);
    double expected = max_pool(map);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
        for (std::size_t i = 0; i + 1 < map.size(); ++i)
            std::swap(map[i], map[i + rng.below(map.size() - i)]);
        CHECK(max_pool(map) == expected);
    }
    // the max dominates every element and is attained
    for (double v : map) CHECK(expected >= v);
    CHECK(std::count(map.begin(), map.end(), expected) >= 1);
}

TEST_CASE("dropout_mask") {
    Rng rng(21);
    SUBCASE("keep probability one is the identity and consumes no randomness") {
        Rng a(5), b(5);
        auto mask = dropout_mask(10, 1.0, a);
        CHECK(mask == std::vector<double>(10, 1.0));
        CHECK(a.next_u64() == b.next_u64());
    }
    SUBCASE("zero fraction matches the keep probability") {
        auto mask = dropout_mask(100000, 0.5, rng);
        std::size_t zeros = std::count(mask.begin(), mask.end(), 0.0);
        double fraction = static_cast<double>(zeros) / 100000.0;
        CHECK(fraction == doctest::Approx(0.5).epsilon(0.02));  // +- 0.01 absolute
        for (double v : mask) CHECK((v == 0.0 || v == 2.0));
    }
    SUBCASE("same seed gives the same mask") {
        Rng a(33), b(33);
        CHECK(dropout_mask(1000, 0.7, a) == dropout_mask(1000, 0.7, b));
    }
    SUBCASE("invalid keep probabilities are rejected") {
        CHECK_THROWS_AS(dropout_mask(4, 0.0, rng), ConfigError);
        CHECK_THROWS_AS(dropout_mask(4, -0.5, rng), ConfigError);
        CHECK_THROWS_AS(dropout_mask(4, 1.5, rng), ConfigError);
    }
}

TEST_CASE("model init shapes and ranges") {
    ModelParams p = ModelParams::init({2, 3, 4}, 5, 8, 77);
    CHECK(p.banks.size() == 3);
    CHECK(p.n_per_width() == 5);
    CHECK(p.feature_dim() == 15);
    CHECK(p.widths() == std::vector<std::size_t>{2, 3, 4});
    CHECK(p.softmax_w.rows() == 15);
    CHECK(p.softmax_w.cols() == 3);
    for (const FilterBank& b : p.banks) {
        CHECK(b.weights.cols() == b.width * 8);
        for (double w : b.weights.data()) {
            CHECK(w >= -0.01);
            CHECK(w < 0.01);
        }
        for (double bias : b.biases) CHECK(bias == 0.0);
    }
    for (double b : p.softmax_b) CHECK(b == 0.0);
    CHECK(parameter_count(p) == 2 * 5 * 8 + 3 * 5 * 8 + 4 * 5 * 8 + 15 + 45 + 3);

    ConvFilter f = p.filter(1, 2);
    CHECK(f.width == 3);
    CHECK(f.weights.size() == 24);

    CHECK(ModelParams::init({2}, 1, 4, 9) == ModelParams::init({2}, 1, 4, 9));
    CHECK_THROWS_AS(ModelParams::init({}, 1, 4, 9), ConfigError);
    CHECK_THROWS_AS(ModelParams::init({2}, 0, 4, 9), ConfigError);
}

TEST_CASE("forward: uniform distribution under zero softmax layer") {
    Rng rng(13);
    ModelParams p = ModelParams::init({2}, 3, 4, 19);
    for (double& w : p.softmax_w.data()) w = 0.0;
    AttendedSentence s = random_attended(rng, 6, 4, 4);
    Forward fw = forward(p, s);
    for (double prob : fw.probs) CHECK(prob == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("forward: probabilities sum to one") {
    Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams p = ModelParams::init({2, 3}, 2, 6, 100 + trial);
        for (auto arr : trainable_arrays(p))
            for (double& w : arr) w = rng.uniform(-0.5, 0.5);
        std::size_t len = 1 + rng.below(7);
        AttendedSentence s = random_attended(rng, 7, len, 6);
        Forward fw = forward(p, s);
        CHECK(fw.probs[0] + fw.probs[1] + fw.probs[2] == doctest::Approx(1.0).epsilon(1e-6));
        for (double prob : fw.probs) {
            CHECK(prob > 0.0);
            CHECK(prob < 1.0);
        }
    }
}

TEST_CASE("forward: zero filters and biases pool to zero") {
    Rng rng(15);
    ModelParams p = ModelParams::init({2, 3}, 2, 4, 3);
    for (FilterBank& b : p.banks) {
        std::fill(b.weights.data().begin(), b.weights.data().end(), 0.0);
        std::fill(b.biases.begin(), b.biases.end(), 0.0);
    }
    AttendedSentence s = random_attended(rng, 5, 5, 4);
    Forward fw = forward(p, s);
    for (double z : fw.pooled) CHECK(z == 0.0);
}

TEST_CASE("forward: prediction invariant to a constant shift of the biases") {
    Rng rng(16);
    ModelParams p = ModelParams::init({2}, 4, 4, 55);
    for (auto arr : trainable_arrays(p))
        for (double& w : arr) w = rng.uniform(-0.4, 0.4);
    AttendedSentence s = random_attended(rng, 6, 5, 4);

    Forward base = forward(p, s);
    std::size_t base_arg = static_cast<std::size_t>(
        std::max_element(base.probs.begin(), base.probs.end()) - base.probs.begin());

    ModelParams shifted = p;
    for (double& b : shifted.softmax_b) b += 3.7;
    Forward moved = forward(shifted, s);
    std::size_t moved_arg = static_cast<std::size_t>(
        std::max_element(moved.probs.begin(), moved.probs.end()) - moved.probs.begin());
    CHECK(base_arg == moved_arg);
}

TEST_CASE("forward: filter reordering with matching softmax rows is a no-op") {
    Rng rng(17);
    ModelParams p = ModelParams::init({2, 3}, 3, 4, 77);
    for (auto arr : trainable_arrays(p))
        for (double& w : arr) w = rng.uniform(-0.5, 0.5);
    AttendedSentence s = random_attended(rng, 6, 6, 4);
    Forward base = forward(p, s);

    // swap filters 0 and 2 inside the first bank together with the
    // corresponding softmax rows
    ModelParams swapped = p;
    for (std::size_t c = 0; c < 4 * 2; ++c)
        std::swap(swapped.banks[0].weights(0, c), swapped.banks[0].weights(2, c));
    std::swap(swapped.banks[0].biases[0], swapped.banks[0].biases[2]);
    for (std::size_t c = 0; c < 3; ++c)
        std::swap(swapped.softmax_w(0, c), swapped.softmax_w(2, c));

    Forward moved = forward(swapped, s);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(moved.probs[c] == doctest::Approx(base.probs[c]).epsilon(1e-12));
}

TEST_CASE("forward records the winning window") {
    // one filter matching exactly the second window
    AttendedSentence s = attended({{0, 0}, {1, 0}, {0, 1}}, 3, 3);
    ModelParams p = ModelParams::init({2}, 1, 2, 0);
    std::fill(p.banks[0].weights.data().begin(), p.banks[0].weights.data().end(), 0.0);
    p.banks[0].weights(0, 0) = 1.0;  // responds to row j having [1, 0]
    Forward fw = forward(p, s);
    CHECK(fw.argmax[0] == 1);
    CHECK(fw.pooled[0] == 1.0);

    std::vector<double> bad_mask(5, 1.0);
    CHECK_THROWS_AS(forward(p, s, bad_mask), ConfigError);
}

TEST_CASE("feature map stacks share one length per width") {
    Rng rng(19);
    ModelParams p = ModelParams::init({2, 3}, 3, 4, 91);
    for (auto arr : trainable_arrays(p))
        for (double& w : arr) w = rng.uniform(-0.5, 0.5);
    AttendedSentence s = random_attended(rng, 9, 6, 4);
    for (std::size_t b = 0; b < p.banks.size(); ++b) {
        FeatureMapStack stack = feature_map_stack(s, p.banks[b]);
        REQUIRE(stack.size() == 3);
        for (std::size_t f = 0; f < stack.size(); ++f) {
            CHECK(stack[f].size() == stack[0].size());
            CHECK(stack[f] == conv_feature_map(s, p.filter(b, f)));
        }
    }
}

TEST_CASE("forward agrees with the per-filter ops") {
    Rng rng(18);
    ModelParams p = ModelParams::init({2, 3}, 2, 4, 88);
    for (auto arr : trainable_arrays(p))
        for (double& w : arr) w = rng.uniform(-0.5, 0.5);
    AttendedSentence s = random_attended(rng, 7, 5, 4);
    Forward fw = forward(p, s);
    std::size_t idx = 0;
    for (std::size_t b = 0; b < p.banks.size(); ++b)
        for (std::size_t f = 0; f < p.n_per_width(); ++f, ++idx)
            CHECK(fw.pooled[idx] == max_pool(conv_feature_map(s, p.filter(b, f))));
}
