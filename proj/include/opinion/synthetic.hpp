// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "opinion/classifiers.hpp"
#include "opinion/document.hpp"
#include "opinion/segmenter.hpp"

/// Deterministic generated corpora for tests, benchmarks and the shipped fixtures.
namespace opinion::synthetic {

/// Every token the generated labelled corpora use, for the segmenter vocabulary.
WordSet labelled_vocab();

/// Balanced corpus in which positive documents draw their sentiment tokens from one set
/// and negative documents from a disjoint set, padded with shared neutral filler.
std::vector<LabelledDoc> separable_corpus(std::size_t n_docs, std::uint64_t seed);

/// Corpus whose labels depend on word order. Half the documents are plain (one polarity
/// only); the other half hold one positive and one negative word with a single `not`
/// in front of one of them, so the bag of words is the same for both labels.
/// `label_noise` of the labels are flipped afterwards.
std::vector<LabelledDoc> order_sensitive_corpus(std::size_t n_docs, double label_noise, std::uint64_t seed);

/// Corpus of short sentences in which `p` and `q` always appear together and `r` only
/// appears among a separate group of filler tokens.
TokenCorpus cooccurrence_corpus(std::uint64_t seed);

/// Raw news items over 2020-01-15..2020-01-24 using the fixture lexicon, gazetteer and
/// source registry under fixtures/. Every item is valid and unique.
std::vector<RawDocument> news_items(std::size_t n, std::uint64_t seed);

/// Labelled documents shaped like an incident timeline: a quiet period, a first rise on
/// Jan 20 (12 of 14 positive), a spike on Jan 23 (34 of 69 positive) and a second low on
/// Jan 28 (37 of 75 positive).
std::vector<OpinionDocument> incident_timeline();

nlohmann::json to_json(const RawDocument& raw);
nlohmann::json to_json(const LabelledDoc& doc);
LabelledDoc labelled_from_json(const nlohmann::json& j);

}  // namespace opinion::synthetic
