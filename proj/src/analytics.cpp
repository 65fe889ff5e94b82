// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "opinion/error.hpp"

namespace opinion {

using nlohmann::json;

double ppr(std::size_t positives, std::size_t count) {
    if (count <= kMinCohortForRatio) return kNeutralRatio;
    return static_cast<double>(positives) / static_cast<double>(count);
}

double ppr(std::span<const OpinionDocument> docs) {
    const auto positives = std::count_if(docs.begin(), docs.end(), [](const OpinionDocument& d) {
        return d.sentiment_label == Sentiment::positive;
    });
    return ppr(static_cast<std::size_t>(positives), docs.size());
}

std::vector<TrendPoint> trend_series(std::span<const OpinionDocument> docs, Date from, Date to) {
    if (from > to) throw ParameterError("from", "from must not be after to");
    const auto days = static_cast<std::size_t>((to - from).count()) + 1;
    std::vector<std::size_t> counts(days, 0), positives(days, 0);
    for (const auto& d : docs) {
        const auto day = date_of(d.published_at);
        if (day < from || day > to) continue;
        const auto i = static_cast<std::size_t>((day - from).count());
        ++counts[i];
        if (d.sentiment_label == Sentiment::positive) ++positives[i];
    }
    std::vector<TrendPoint> out;
    out.reserve(days);
    for (std::size_t i = 0; i < days; ++i) {
        out.push_back({from + std::chrono::days{static_cast<long>(i)}, counts[i], ppr(positives[i], counts[i])});
    }
    return out;
}

std::vector<RegionStat> region_stats(std::span<const OpinionDocument> docs) {
    struct Tally {
        std::size_t count = 0;
        std::size_t positives = 0;
    };
    std::map<std::string, Tally> by_region;
    for (const auto& d : docs) {
        if (!d.regions.primary) continue;
        auto& t = by_region[*d.regions.primary];
        ++t.count;
        if (d.sentiment_label == Sentiment::positive) ++t.positives;
    }
    std::vector<RegionStat> out;
    const auto total = static_cast<double>(docs.size());
    for (const auto& [region, t] : by_region) {
        out.push_back({region, t.count, ppr(t.positives, t.count), static_cast<double>(t.count) / total});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RegionStat& a, const RegionStat& b) { return a.count > b.count; });
    return out;
}

namespace {

double median_of(const std::vector<double>& sorted, std::size_t begin, std::size_t end) {
    const std::size_t n = end - begin;
    const std::size_t mid = begin + n / 2;
    return n % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
}

}  // namespace

std::optional<BoxStats> box_stats(std::vector<double> values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const std::size_t half = (n + 1) / 2;
    BoxStats b;
    b.min = values.front();
    b.max = values.back();
    b.median = median_of(values, 0, n);
    b.q1 = median_of(values, 0, half);
    b.q3 = median_of(values, n - half, n);
    return b;
}

std::vector<MediaSummaryEntry> media_summary(std::span<const OpinionDocument> docs) {
    double limit = 0.0;
    for (const auto& d : docs) {
        if (d.sentiment_score) limit = std::max(limit, std::abs(*d.sentiment_score));
    }
    std::vector<MediaSummaryEntry> out;
    for (auto media : kAllMediaTypes) {
        MediaSummaryEntry e;
        e.media_type = media;
        e.histogram_limit = limit;
        std::size_t positives = 0;
        std::vector<double> scores;
        for (const auto& d : docs) {
            if (d.media_type != media) continue;
            ++e.count;
            if (d.sentiment_label == Sentiment::positive) ++positives;
            if (!d.sentiment_score) continue;
            const double s = *d.sentiment_score;
            scores.push_back(s);
            std::size_t bin = kHistogramBins / 2;
            if (limit > 0.0) {
                const double pos = (s + limit) * static_cast<double>(kHistogramBins) / (2.0 * limit);
                bin = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, double(kHistogramBins - 1)));
            }
            ++e.histogram[bin];
        }
        e.ppr = ppr(positives, e.count);
        e.box = box_stats(std::move(scores));
        out.push_back(e);
    }
    return out;
}

json to_json(const std::vector<TrendPoint>& series) {
    json out = json::array();
    for (const auto& p : series) out.push_back({{"date", format_date(p.date)}, {"count", p.count}, {"ppr", p.ppr}});
    return out;
}

json to_json(const std::vector<RegionStat>& stats) {
    json out = json::array();
    for (const auto& s : stats) {
        out.push_back({{"region", s.region}, {"count", s.count}, {"ppr", s.ppr}, {"attention", s.attention}});
    }
    return out;
}

json to_json(const std::vector<MediaSummaryEntry>& summary) {
    json out = json::array();
    for (const auto& e : summary) {
        json box = nullptr;
        if (e.box) {
            box = {{"min", e.box->min}, {"q1", e.box->q1}, {"median", e.box->median}, {"q3", e.box->q3},
                   {"max", e.box->max}};
        }
        out.push_back({{"media_type", to_string(e.media_type)},
                       {"count", e.count},
                       {"ppr", e.ppr},
                       {"histogram", {{"limit", e.histogram_limit}, {"bins", e.histogram}}},
                       {"box_stats", box}});
    }
    return out;
}

}  // namespace opinion
