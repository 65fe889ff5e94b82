// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "opinion/document.hpp"

namespace opinion {

/// Positive is the target class.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    bool operator==(const ConfusionCounts&) const = default;
};

/// Throws ParameterError if the lists differ in length or are empty.
ConfusionCounts confusion(std::span<const Sentiment> predicted, std::span<const Sentiment> truth);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2tp/(2tp+fp+fn); 0/0 is reported as 0.
Metrics metrics(const ConfusionCounts& c);

/// `{counts: {tp, fp, fn, tn}, precision, recall, f1}`
nlohmann::json evaluation_report(const ConfusionCounts& c);

/// Seeded, stratified split. Each class is shuffled on its own and
/// round(test_fraction * class_size) of it goes to the test side.
/// Throws ParameterError for a fraction outside (0, 1) or a class with fewer than 2 items.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_dataset(const std::vector<T>& docs, double test_fraction,
                                                        std::uint64_t seed);

/// Index form used by the template above: returns (train indices, test indices).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::span<const Sentiment> labels,
                                                                            double test_fraction,
                                                                            std::uint64_t seed);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_dataset(const std::vector<T>& docs, double test_fraction,
                                                        std::uint64_t seed) {
    std::vector<Sentiment> labels;
    labels.reserve(docs.size());
    for (const auto& d : docs) labels.push_back(d.label);
    const auto [train_idx, test_idx] = split_indices(labels, test_fraction, seed);
    std::pair<std::vector<T>, std::vector<T>> out;
    for (auto i : train_idx) out.first.push_back(docs[i]);
    for (auto i : test_idx) out.second.push_back(docs[i]);
    return out;
}

}  // namespace opinion
