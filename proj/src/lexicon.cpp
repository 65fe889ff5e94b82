// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/lexicon.hpp"

#include <charconv>
#include <cmath>

#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

std::string_view to_string(DegreeCategory c) {
    switch (c) {
        case DegreeCategory::most:
            return "most";
        case DegreeCategory::very:
            return "very";
        case DegreeCategory::more:
            return "more";
        case DegreeCategory::nearly:
            return "nearly";
        case DegreeCategory::barely:
            return "barely";
    }
    return "very";
}

std::optional<DegreeCategory> parse_degree_category(std::string_view s) {
    for (auto c : kDegreeCategories) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

WordSet Lexicons::modifiers() const {
    WordSet out(negation.begin(), negation.end());
    for (const auto& [w, _] : degree) out.insert(w);
    return out;
}

WordSet Lexicons::words() const {
    WordSet out = modifiers();
    for (const auto& [w, _] : sentiment) out.insert(w);
    return out;
}

void Lexicons::validate() const {
    for (const auto& [w, weight] : sentiment) {
        if (weight == 0.0 || !std::isfinite(weight)) throw LoadError("sentiment weight must be non-zero: " + w);
        if (degree.count(w)) throw LoadError("word in both sentiment and degree dictionaries: " + w);
        if (negation.count(w)) throw LoadError("word in both sentiment and negation dictionaries: " + w);
    }
    for (const auto& [w, _] : degree) {
        if (negation.count(w)) throw LoadError("word in both degree and negation dictionaries: " + w);
    }
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
        if (!(multipliers[i] > 0.0)) {
            throw LoadError("degree multiplier must be positive: " + std::string(to_string(kDegreeCategories[i])));
        }
        if (i > 0 && !(multipliers[i] < multipliers[i - 1])) {
            throw LoadError("degree multipliers must strictly decrease from most to barely");
        }
    }
}

namespace {

std::string where(const std::string& path, std::size_t line) { return path + ":" + std::to_string(line + 1); }

double parse_number(const std::string& s, const std::string& context) {
    const auto t = text::trim(s);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw LoadError(context + ": not a number: '" + t + "'");
    }
    return v;
}

std::pair<std::string, std::string> split_tab(const std::string& line, const std::string& context) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw LoadError(context + ": expected two tab-separated columns");
    return {text::trim(line.substr(0, tab)), text::trim(line.substr(tab + 1))};
}

WordSet load_word_list(const std::string& path) {
    WordSet out;
    for (const auto& line : text::read_lines(path)) {
        auto w = text::trim(line);
        if (!w.empty()) out.insert(std::move(w));
    }
    return out;
}

}  // namespace

Lexicons load_lexicons(const LexiconPaths& paths) {
    Lexicons lex;

    const auto sentiment_lines = text::read_lines(paths.sentiment);
    for (std::size_t n = 0; n < sentiment_lines.size(); ++n) {
        if (text::trim(sentiment_lines[n]).empty()) continue;
        const auto ctx = where(paths.sentiment, n);
        auto [word, weight] = split_tab(sentiment_lines[n], ctx);
        if (word.empty()) throw LoadError(ctx + ": empty word");
        lex.sentiment[word] = parse_number(weight, ctx);
    }

    const auto degree_lines = text::read_lines(paths.degree);
    for (std::size_t n = 0; n < degree_lines.size(); ++n) {
        const auto& line = degree_lines[n];
        if (text::trim(line).empty()) continue;
        const auto ctx = where(paths.degree, n);
        if (line[0] == '#') {
            if (line.find('\t') == std::string::npos) continue;  // comment
            auto [name, value] = split_tab(line.substr(1), ctx);
            const auto cat = parse_degree_category(name);
            if (!cat) throw LoadError(ctx + ": unknown degree category '" + name + "'");
            lex.multipliers[static_cast<std::size_t>(*cat)] = parse_number(value, ctx);
            continue;
        }
        auto [word, category] = split_tab(line, ctx);
        const auto cat = parse_degree_category(category);
        if (!cat) throw LoadError(ctx + ": unknown degree category '" + category + "' for '" + word + "'");
        if (word.empty()) throw LoadError(ctx + ": empty word");
        lex.degree[word] = *cat;
    }

    lex.negation = load_word_list(paths.negation);
    lex.stopwords = load_word_list(paths.stopwords);
    lex.validate();
    return lex;
}

double score_sentence(const std::vector<std::string>& tokens, const Lexicons& lex) {
    double total = 0.0;
    double degree = 1.0;
    int negations = 0;
    for (const auto& token : tokens) {
        if (const auto it = lex.sentiment.find(token); it != lex.sentiment.end()) {
            const double sign = (negations % 2 == 0) ? 1.0 : -1.0;
            total += it->second * degree * sign;
            degree = 1.0;
            negations = 0;
        } else if (const auto d = lex.degree.find(token); d != lex.degree.end()) {
            degree *= lex.multiplier(d->second);
        } else if (lex.negation.count(token)) {
            ++negations;
        }
    }
    return total;
}

SentimentResult score_document(std::string_view input, const Lexicons& lex, const SegmenterVocab& vocab) {
    SentimentResult result;
    const auto exempt = lex.modifiers();
    for (auto& sentence : split_sentences(input)) {
        const auto tokens = remove_stopwords(tokenize(sentence, vocab), lex.stopwords, exempt);
        const double s = score_sentence(tokens, lex);
        result.score += s;
        result.per_sentence.emplace_back(std::move(sentence), s);
    }
    result.label = label_for_score(result.score);
    return result;
}

}  // namespace opinion
