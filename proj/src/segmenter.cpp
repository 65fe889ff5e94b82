// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/segmenter.hpp"

#include <algorithm>

#include "opinion/text.hpp"

namespace opinion {

SegmenterVocab::SegmenterVocab(const WordSet& words) { merge(words); }

SegmenterVocab SegmenterVocab::load(const std::string& path) {
    SegmenterVocab vocab;
    for (const auto& line : text::read_lines(path)) {
        const auto word = text::trim(line);
        if (!word.empty()) vocab.add(word);
    }
    return vocab;
}

void SegmenterVocab::add(std::string_view word) {
    if (word.empty()) return;
    const auto [it, inserted] = entries_.emplace(word);
    if (inserted) max_word_len_ = std::max(max_word_len_, text::char_boundaries(word).size() - 1);
}

void SegmenterVocab::merge(const WordSet& words) {
    for (const auto& w : words) add(w);
}

namespace {

bool is_sentence_end(char32_t cp) {
    switch (cp) {
        case U'。':
        case U'！':
        case U'？':
        case U'!':
        case U'?':
        case U'.':
        case U'\n':
            return true;
        default:
            return false;
    }
}

void flush_sentence(std::u32string& current, std::vector<std::string>& out) {
    std::size_t b = 0;
    std::size_t e = current.size();
    while (b < e && text::is_space(current[b])) ++b;
    while (e > b && text::is_space(current[e - 1])) --e;
    bool has_body = false;
    for (std::size_t i = b; i < e; ++i) {
        if (!is_sentence_end(current[i])) {
            has_body = true;
            break;
        }
    }
    if (has_body) out.push_back(text::encode_utf8(std::u32string_view(current).substr(b, e - b)));
    current.clear();
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view input) {
    std::vector<std::string> out;
    std::u32string current;
    for (char32_t cp : text::decode_utf8(input)) {
        if (cp == U'\n') {
            flush_sentence(current, out);
            continue;
        }
        current.push_back(cp);
        if (is_sentence_end(cp)) flush_sentence(current, out);
    }
    flush_sentence(current, out);
    return out;
}

std::vector<std::string> tokenize(std::string_view sentence, const SegmenterVocab& vocab) {
    const auto bounds = text::char_boundaries(sentence);
    const std::size_t n = bounds.size() - 1;
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t take = 1;
        const std::size_t longest = std::min(vocab.max_word_len(), n - pos);
        for (std::size_t len = longest; len >= 2; --len) {
            if (vocab.contains(sentence.substr(bounds[pos], bounds[pos + len] - bounds[pos]))) {
                take = len;
                break;
            }
        }
        tokens.emplace_back(sentence.substr(bounds[pos], bounds[pos + take] - bounds[pos]));
        pos += take;
    }
    return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens, const WordSet& stopwords,
                                          const WordSet& exempt) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (stopwords.count(t) && !exempt.count(t)) continue;
        out.push_back(t);
    }
    return out;
}

std::vector<std::string> content_tokens(std::string_view input, const SegmenterVocab& vocab,
                                        const WordSet& stopwords) {
    std::vector<std::string> out;
    for (const auto& sentence : split_sentences(input)) {
        for (auto& t : tokenize(sentence, vocab)) {
            if (!stopwords.count(t) && text::has_word_char(t)) out.push_back(std::move(t));
        }
    }
    return out;
}

}  // namespace opinion
