// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "opinion/error.hpp"
#include "opinion/random.hpp"

namespace opinion {

ConfusionCounts confusion(std::span<const Sentiment> predicted, std::span<const Sentiment> truth) {
    if (predicted.size() != truth.size()) {
        throw ParameterError("predicted", "prediction and truth lists differ in length");
    }
    if (predicted.empty()) throw ParameterError("predicted", "nothing to evaluate");
    ConfusionCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] == Sentiment::positive;
        const bool t = truth[i] == Sentiment::positive;
        if (p && t) {
            ++c.tp;
        } else if (p) {
            ++c.fp;
        } else if (t) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

Metrics metrics(const ConfusionCounts& c) {
    const auto tp = static_cast<double>(c.tp);
    const auto fp = static_cast<double>(c.fp);
    const auto fn = static_cast<double>(c.fn);
    return {ratio(tp, tp + fp), ratio(tp, tp + fn), ratio(2.0 * tp, 2.0 * tp + fp + fn)};
}

nlohmann::json evaluation_report(const ConfusionCounts& c) {
    const auto m = metrics(c);
    return {{"counts", {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}}},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1}};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::span<const Sentiment> labels,
                                                                            double test_fraction,
                                                                            std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ParameterError("test_fraction", "test_fraction must lie strictly between 0 and 1");
    }
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i] == Sentiment::positive ? 0 : 1].push_back(i);
    }
    Rng rng(seed);
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
    for (auto& members : by_class) {
        if (members.size() < 2) throw ParameterError("docs", "each class needs at least 2 documents to split");
        rng.shuffle(members);
        auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(members.size())));
        n_test = std::clamp<std::size_t>(n_test, 1, members.size() - 1);
        out.second.insert(out.second.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
        out.first.insert(out.first.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
    }
    // Shuffle the combined splits so classes are interleaved.
    rng.shuffle(out.first);
    rng.shuffle(out.second);
    return out;
}

}  // namespace opinion
