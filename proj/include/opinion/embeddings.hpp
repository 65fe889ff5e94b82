// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opinion/linalg.hpp"

namespace opinion {

using TokenCorpus = std::vector<std::vector<std::string>>;

struct EmbeddingVocab {
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::string> words;
    std::vector<std::uint64_t> counts;

    std::size_t size() const { return words.size(); }
    std::optional<std::size_t> find(std::string_view w) const;
};

/// Keeps tokens seen at least `min_count` times; index 0 is the most frequent,
/// equal counts ordered lexicographically. Throws ParameterError when nothing survives.
EmbeddingVocab build_vocab(const TokenCorpus& corpus, std::size_t min_count);

struct EmbedTrainConfig {
    std::size_t dim = 100;
    std::size_t window = 5;
    std::size_t negatives = 5;
    std::size_t epochs = 5;
    double learning_rate = 0.025;
    std::size_t min_count = 1;
    std::uint64_t seed = 1;

    void validate() const;
};

class EmbeddingModel {
public:
    EmbeddingModel() = default;
    EmbeddingModel(std::vector<std::string> words, Matrix vectors);

    std::size_t size() const { return words_.size(); }
    std::size_t dim() const { return vectors_.cols; }
    const std::vector<std::string>& words() const { return words_; }
    const Matrix& vectors() const { return vectors_; }

    std::optional<std::size_t> find(std::string_view w) const;

    /// Row for `w`, or nullopt for out-of-vocabulary words.
    std::optional<std::span<const double>> vector(std::string_view w) const;

    /// Header `|V| d`, then `word v1 ... vd` per line.
    void save(const std::string& path) const;
    static EmbeddingModel load(const std::string& path);

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
    Matrix vectors_;
};

struct EmbedTrainResult {
    EmbeddingModel model;
    /// Mean negative-sampling loss per (center, context) pair over the whole corpus,
    /// measured after each epoch with the same negatives every time.
    std::vector<double> epoch_loss;
    /// The same quantity accumulated during the epoch, before each update.
    std::vector<double> online_loss;
};

/// Skip-gram with negative sampling, single threaded and fully determined by `cfg.seed`.
/// Throws DivergenceError when a vector becomes non-finite.
EmbedTrainResult train_skipgram(const TokenCorpus& corpus, const EmbedTrainConfig& cfg);

/// Throws NotFoundError for out-of-vocabulary words.
double cosine(std::string_view a, std::string_view b, const EmbeddingModel& model);
double cosine(std::span<const double> a, std::span<const double> b);

/// Mean of the in-vocabulary token vectors; the zero vector when there are none.
Vector embed_document(const std::vector<std::string>& tokens, const EmbeddingModel& model);

}  // namespace opinion
