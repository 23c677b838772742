#pragma once

#include <array>
#include <cstdint>

#include "acnn/text.hpp"

namespace acnn {

// rows = gold class, columns = predicted class, both in the order
// positive, neutral, negative.
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, 3>, 3> counts{};

    void add(Polarity gold, Polarity predicted) {
        ++counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
    }

    std::int64_t total() const {
        std::int64_t n = 0;
        for (const auto& row : counts)
            for (std::int64_t c : row) n += c;
        return n;
    }
};

double accuracy(const ConfusionMatrix& cm);

// Unweighted mean of per-class F1; 0/0 counts as 0.
double macro_f1(const ConfusionMatrix& cm);

}  // namespace acnn
