// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

std::string_view to_string(AdminLevel level) {
    switch (level) {
        case AdminLevel::province:
            return "province";
        case AdminLevel::city:
            return "city";
        case AdminLevel::county:
            return "county";
    }
    return "province";
}

std::optional<AdminLevel> parse_admin_level(std::string_view s) {
    for (auto l : {AdminLevel::province, AdminLevel::city, AdminLevel::county}) {
        if (to_string(l) == s) return l;
    }
    return std::nullopt;
}

Gazetteer Gazetteer::load(const std::string& path) {
    Gazetteer gaz;
    const auto lines = text::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = text::trim(lines[n]);
        if (line.empty() || line[0] == '#') continue;
        const auto fields = text::split(line, ',');
        const auto where = path + ":" + std::to_string(n + 1);
        if (fields.size() != 3) throw LoadError(where + ": expected name,level,province_code");
        if (n == 0 && text::trim(fields[0]) == "name" && text::trim(fields[1]) == "level") continue;
        const auto level = parse_admin_level(text::trim(fields[1]));
        if (!level) throw LoadError(where + ": unknown level '" + fields[1] + "'");
        try {
            gaz.add({text::trim(fields[0]), *level, text::trim(fields[2])});
        } catch (const LoadError& e) {
            throw LoadError(where + ": " + e.what());
        }
    }
    return gaz;
}

void Gazetteer::add(GazetteerEntry entry) {
    if (entry.name.empty() || entry.province_code.empty()) throw LoadError("gazetteer entry has an empty field");
    auto& slots = by_name_[entry.name];
    for (auto i : slots) {
        if (entries_[i].level == entry.level) {
            throw LoadError("duplicate gazetteer entry '" + entry.name + "' at level " +
                            std::string(to_string(entry.level)));
        }
    }
    max_len_ = std::max(max_len_, text::char_boundaries(entry.name).size() - 1);
    slots.push_back(entries_.size());
    entries_.push_back(std::move(entry));
    // Keep the preferred level first.
    std::sort(slots.begin(), slots.end(), [this](std::size_t a, std::size_t b) {
        return static_cast<int>(entries_[a].level) < static_cast<int>(entries_[b].level);
    });
}

const GazetteerEntry* Gazetteer::lookup(std::string_view name) const {
    const auto it = by_name_.find(std::string(name));
    if (it == by_name_.end() || it->second.empty()) return nullptr;
    return &entries_[it->second.front()];
}

WordSet Gazetteer::names() const {
    WordSet out;
    for (const auto& e : entries_) out.insert(e.name);
    return out;
}

RegionInfo RegionExtraction::info() const {
    RegionInfo info;
    for (const auto& m : mentions) {
        if (std::find(info.codes.begin(), info.codes.end(), m.province_code) == info.codes.end()) {
            info.codes.push_back(m.province_code);
        }
    }
    info.primary = primary;
    return info;
}

RegionExtraction extract_regions(std::string_view input, const Gazetteer& gazetteer) {
    RegionExtraction out;
    const auto bounds = text::char_boundaries(input);
    const std::size_t n = bounds.size() - 1;
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t matched = 0;
        const GazetteerEntry* entry = nullptr;
        for (std::size_t len = std::min(gazetteer.max_name_len(), n - pos); len >= 1; --len) {
            entry = gazetteer.lookup(input.substr(bounds[pos], bounds[pos + len] - bounds[pos]));
            if (entry) {
                matched = len;
                break;
            }
        }
        if (entry) {
            out.mentions.push_back({entry->name, entry->province_code, pos});
            pos += matched;
        } else {
            ++pos;
        }
    }

    std::map<std::string, std::size_t> counts;
    for (const auto& m : out.mentions) ++counts[m.province_code];
    std::size_t best = 0;
    for (const auto& m : out.mentions) {
        // Mentions are in text order, so the first province reaching the maximum wins ties.
        if (counts[m.province_code] > best) {
            best = counts[m.province_code];
            out.primary = m.province_code;
        }
    }
    return out;
}

PageRankResult pagerank(const WeightedGraph& graph, double damping, double tolerance, std::size_t max_iterations,
                        const std::function<void(const Vector&)>& observer) {
    const std::size_t n = graph.size();
    PageRankResult r;
    r.scores.assign(n, 1.0);
    Vector out_weight(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (const auto& [_, w] : graph[j]) out_weight[j] += w;
    }
    Vector next(n);
    while (r.iterations < max_iterations) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (const auto& [j, w] : graph[i]) {
                if (out_weight[j] > 0.0) s += w / out_weight[j] * r.scores[j];
            }
            next[i] = (1.0 - damping) + damping * s;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] - r.scores[i]));
        r.scores.swap(next);
        ++r.iterations;
        r.last_delta = delta;
        if (observer) observer(r.scores);
        if (delta < tolerance) {
            r.converged = true;
            break;
        }
    }
    if (n == 0) r.converged = true;
    double total = 0.0;
    for (double s : r.scores) total += s;
    r.normalized = r.scores;
    if (total > 0.0) {
        for (auto& s : r.normalized) s /= total;
    }
    return r;
}

std::vector<Keyword> textrank_keywords(std::string_view input, std::size_t k, std::size_t window,
                                       const SegmenterVocab& vocab, const WordSet& stopwords) {
    if (k < 1) throw ParameterError("k", "k must be at least 1");
    if (window < 2) throw ParameterError("window", "window must be at least 2");

    std::vector<std::vector<std::string>> sentences;
    std::set<std::string> distinct;
    for (const auto& s : split_sentences(input)) {
        auto tokens = content_tokens(s, vocab, stopwords);
        distinct.insert(tokens.begin(), tokens.end());
        sentences.push_back(std::move(tokens));
    }
    const std::vector<std::string> nodes(distinct.begin(), distinct.end());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& tokens : sentences) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            for (std::size_t j = i + 1; j < tokens.size() && j - i < window; ++j) {
                const auto a = index.at(tokens[i]);
                const auto b = index.at(tokens[j]);
                if (a != b) edges.emplace(std::min(a, b), std::max(a, b));
            }
        }
    }
    WeightedGraph graph(nodes.size());
    for (const auto& [a, b] : edges) {
        graph[a].emplace_back(b, 1.0);
        graph[b].emplace_back(a, 1.0);
    }

    const auto pr = pagerank(graph);
    std::vector<Keyword> ranked;
    for (std::size_t i = 0; i < nodes.size(); ++i) ranked.push_back({nodes[i], pr.normalized[i]});
    std::stable_sort(ranked.begin(), ranked.end(), [](const Keyword& a, const Keyword& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.word < b.word;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

std::vector<std::string> textrank_abstract(std::string_view input, std::size_t n, const SegmenterVocab& vocab,
                                           const WordSet& stopwords) {
    if (n < 1) throw ParameterError("n", "n must be at least 1");
    const auto sentences = split_sentences(input);
    if (sentences.size() <= n) return sentences;

    std::vector<std::set<std::string>> token_sets;
    std::vector<std::size_t> lengths;
    for (const auto& s : sentences) {
        const auto tokens = content_tokens(s, vocab, stopwords);
        lengths.push_back(tokens.size());
        token_sets.emplace_back(tokens.begin(), tokens.end());
    }

    WeightedGraph graph(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        for (std::size_t j = i + 1; j < sentences.size(); ++j) {
            if (lengths[i] == 0 || lengths[j] == 0) continue;
            std::size_t shared = 0;
            for (const auto& t : token_sets[i]) shared += token_sets[j].count(t);
            if (shared == 0) continue;
            const double w = static_cast<double>(shared) /
                             (std::log(1.0 + static_cast<double>(lengths[i])) +
                              std::log(1.0 + static_cast<double>(lengths[j])));
            graph[i].emplace_back(j, w);
            graph[j].emplace_back(i, w);
        }
    }

    const auto pr = pagerank(graph);
    std::vector<std::size_t> order(sentences.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pr.scores[a] > pr.scores[b]; });
    order.resize(n);
    std::sort(order.begin(), order.end());
    std::vector<std::string> out;
    for (auto i : order) out.push_back(sentences[i]);
    return out;
}

}  // namespace opinion
