// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "opinion/document.hpp"
#include "opinion/linalg.hpp"
#include "opinion/segmenter.hpp"

namespace opinion {

// ---------------------------------------------------------------------------
// Place names

enum class AdminLevel { province, city, county };

std::string_view to_string(AdminLevel level);
std::optional<AdminLevel> parse_admin_level(std::string_view s);

struct GazetteerEntry {
    std::string name;
    AdminLevel level = AdminLevel::province;
    std::string province_code;
};

class Gazetteer {
public:
    Gazetteer() = default;

    /// CSV `name,level,province_code` with an optional header row.
    static Gazetteer load(const std::string& path);

    /// Throws LoadError if (name, level) is already present or a field is empty.
    void add(GazetteerEntry entry);

    /// The entry for `name`, preferring province over city over county.
    const GazetteerEntry* lookup(std::string_view name) const;

    const std::vector<GazetteerEntry>& entries() const { return entries_; }
    std::size_t max_name_len() const { return max_len_; }
    WordSet names() const;

private:
    std::vector<GazetteerEntry> entries_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_name_;
    std::size_t max_len_ = 0;
};

struct RegionMention {
    std::string name;
    std::string province_code;
    /// Position in Unicode scalars from the start of the text.
    std::size_t offset = 0;
};

struct RegionExtraction {
    std::vector<RegionMention> mentions;
    /// Province with the most mentions; ties go to the earliest mentioned.
    std::optional<std::string> primary;

    RegionInfo info() const;
};

/// Leftmost-longest scan of the raw text against the gazetteer.
RegionExtraction extract_regions(std::string_view text, const Gazetteer& gazetteer);

// ---------------------------------------------------------------------------
// TextRank

inline constexpr double kDamping = 0.85;
inline constexpr double kTolerance = 1e-6;
inline constexpr std::size_t kMaxIterations = 200;
inline constexpr std::size_t kKeywordWindow = 4;

/// Undirected weighted graph as adjacency lists; every edge appears in both lists.
using WeightedGraph = std::vector<std::vector<std::pair<std::size_t, double>>>;

struct PageRankResult {
    Vector scores;      // raw scores, each node starting at 1
    Vector normalized;  // scores / sum(scores)
    std::size_t iterations = 0;
    double last_delta = 0.0;
    bool converged = false;
};

/// s_i <- (1 - d) + d * sum_j w_ji / W_j * s_j, where W_j is the total edge weight of j.
/// Stops once the largest change drops below `tolerance`. `observer` sees the
/// score vector after every iteration.
PageRankResult pagerank(const WeightedGraph& graph, double damping = kDamping, double tolerance = kTolerance,
                        std::size_t max_iterations = kMaxIterations,
                        const std::function<void(const Vector&)>& observer = {});

struct Keyword {
    std::string word;
    double score = 0.0;
};

/// Top-k tokens of the co-occurrence graph (edge iff two distinct content tokens appear
/// fewer than `window` positions apart in one sentence). Scores are normalized to sum to
/// one over all nodes; ties rank lexicographically.
std::vector<Keyword> textrank_keywords(std::string_view text, std::size_t k, std::size_t window,
                                       const SegmenterVocab& vocab, const WordSet& stopwords);

/// Top-n sentences of the similarity graph, returned in document order. Similarity is
/// |shared content tokens| / (log(1 + len_i) + log(1 + len_j)).
std::vector<std::string> textrank_abstract(std::string_view text, std::size_t n, const SegmenterVocab& vocab,
                                           const WordSet& stopwords);

struct KeywordResult {
    std::vector<Keyword> keywords;
    std::vector<std::string> abstract;
};

}  // namespace opinion
