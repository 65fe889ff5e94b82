// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace opinion {

using WordSet = std::unordered_set<std::string>;

/// Dictionary for forward maximum matching. Lengths are counted in Unicode scalars.
class SegmenterVocab {
public:
    SegmenterVocab() = default;
    explicit SegmenterVocab(const WordSet& words);

    /// One word per line, UTF-8. Blank lines are ignored.
    static SegmenterVocab load(const std::string& path);

    void add(std::string_view word);
    void merge(const WordSet& words);

    bool contains(std::string_view word) const { return entries_.count(std::string(word)) != 0; }
    const WordSet& entries() const { return entries_; }
    std::size_t max_word_len() const { return max_word_len_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    WordSet entries_;
    std::size_t max_word_len_ = 0;
};

/// Splits after each of 。！？!?. and at newlines. Delimiters stay attached to their
/// sentence, surrounding whitespace is trimmed, and fragments with nothing but
/// delimiters or whitespace are dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Greedy forward longest match. Joining the result reproduces `sentence` exactly.
std::vector<std::string> tokenize(std::string_view sentence, const SegmenterVocab& vocab);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens, const WordSet& stopwords,
                                          const WordSet& exempt);

/// Tokens carrying at least one letter, digit or ideograph, minus stopwords.
/// This is the token stream used for keywords, embeddings and classifiers.
std::vector<std::string> content_tokens(std::string_view text, const SegmenterVocab& vocab,
                                        const WordSet& stopwords);

}  // namespace opinion
