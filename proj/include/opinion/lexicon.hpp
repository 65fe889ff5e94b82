// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opinion/document.hpp"
#include "opinion/segmenter.hpp"

namespace opinion {

/// Intensity classes of degree adverbs, strongest first.
enum class DegreeCategory { most, very, more, nearly, barely };

inline constexpr std::array<DegreeCategory, 5> kDegreeCategories = {
    DegreeCategory::most, DegreeCategory::very, DegreeCategory::more, DegreeCategory::nearly,
    DegreeCategory::barely};

std::string_view to_string(DegreeCategory c);
std::optional<DegreeCategory> parse_degree_category(std::string_view s);

/// Default multipliers, indexed by DegreeCategory.
inline constexpr std::array<double, 5> kDefaultDegreeMultipliers = {2.0, 1.75, 1.5, 0.8, 0.5};

struct Lexicons {
    std::unordered_map<std::string, double> sentiment;
    std::unordered_map<std::string, DegreeCategory> degree;
    std::array<double, 5> multipliers = kDefaultDegreeMultipliers;
    WordSet negation;
    WordSet stopwords;

    double multiplier(DegreeCategory c) const { return multipliers[static_cast<std::size_t>(c)]; }

    /// Negation and degree words; these survive stopword removal.
    WordSet modifiers() const;

    /// Every sentiment, degree and negation word.
    WordSet words() const;

    /// Throws LoadError on overlap between dictionaries, a zero weight or a
    /// multiplier table that is not positive and strictly decreasing.
    void validate() const;
};

struct LexiconPaths {
    std::string sentiment;
    std::string degree;
    std::string negation;
    std::string stopwords;
};

/// Sentiment: TSV `word<TAB>weight`. Degree: TSV `word<TAB>category`, with optional
/// `#category<TAB>multiplier` lines overriding the defaults. Negation and stopword
/// files: one word per line. The result is validated.
Lexicons load_lexicons(const LexiconPaths& paths);

/// Sum of modifier-adjusted sentiment weights in one stopword-filtered sentence.
///
/// Each sentiment word is modified by the degree and negation words between it and the
/// previous sentiment word (or the sentence start): its weight is multiplied by every
/// degree multiplier in that window and negated once per negation word.
double score_sentence(const std::vector<std::string>& tokens, const Lexicons& lex);

struct SentimentResult {
    double score = 0.0;
    Sentiment label = Sentiment::negative;
    std::vector<std::pair<std::string, double>> per_sentence;
};

/// Positive only when the score is strictly above zero.
inline Sentiment label_for_score(double score) { return score > 0.0 ? Sentiment::positive : Sentiment::negative; }

SentimentResult score_document(std::string_view text, const Lexicons& lex, const SegmenterVocab& vocab);

}  // namespace opinion
