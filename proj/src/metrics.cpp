#include "acnn/metrics.hpp"

#include "acnn/errors.hpp"

namespace acnn {

double accuracy(const ConfusionMatrix& cm) {
    std::int64_t total = cm.total();
    if (total == 0) throw DataError("accuracy of an empty confusion matrix");
    std::int64_t trace = cm.counts[0][0] + cm.counts[1][1] + cm.counts[2][2];
    return static_cast<double>(trace) / static_cast<double>(total);
}

double macro_f1(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DataError("macro-F1 of an empty confusion matrix");
    double sum = 0;
    for (std::size_t c = 0; c < 3; ++c) {
        std::int64_t tp = cm.counts[c][c];
        std::int64_t fp = 0, fn = 0;
        for (std::size_t r = 0; r < 3; ++r) {
            if (r == c) continue;
            fp += cm.counts[r][c];
            fn += cm.counts[c][r];
        }
        double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        double f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        sum += f1;
    }
    return sum / 3.0;
}

}  // namespace acnn
