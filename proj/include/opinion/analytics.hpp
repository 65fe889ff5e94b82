// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "opinion/document.hpp"

namespace opinion {

/// Cohorts of this size or smaller get the neutral ratio instead of a measured one.
inline constexpr std::size_t kMinCohortForRatio = 10;
inline constexpr double kNeutralRatio = 0.5;
inline constexpr std::size_t kHistogramBins = 21;

/// Share of positive documents; exactly 0.5 when there are 10 or fewer.
/// Documents without a label count toward the size but not the positives.
double ppr(std::span<const OpinionDocument> docs);
double ppr(std::size_t positives, std::size_t count);

struct TrendPoint {
    Date date;
    std::size_t count = 0;
    double ppr = kNeutralRatio;
};

/// One point per UTC day in [from, to]. Documents outside the range are ignored.
/// Throws ParameterError if from > to.
std::vector<TrendPoint> trend_series(std::span<const OpinionDocument> docs, Date from, Date to);

struct RegionStat {
    std::string region;
    std::size_t count = 0;
    double ppr = kNeutralRatio;
    /// region count / all documents, including those without a region.
    double attention = 0.0;
};

/// Grouped by primary region, largest count first, ties by region code.
std::vector<RegionStat> region_stats(std::span<const OpinionDocument> docs);

struct BoxStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// Five-number summary with Tukey hinges (medians of the lower and upper halves, the
/// median itself belonging to both halves when the count is odd). Empty input gives nullopt.
std::optional<BoxStats> box_stats(std::vector<double> values);

struct MediaSummaryEntry {
    MediaType media_type = MediaType::mass;
    std::size_t count = 0;
    double ppr = kNeutralRatio;
    /// 21 uniform bins over [-max|score|, +max|score|] across all media types.
    std::array<std::size_t, kHistogramBins> histogram{};
    double histogram_limit = 0.0;
    std::optional<BoxStats> box;
};

/// One entry per media type, in government, mass, social order. Documents without a
/// sentiment score count toward count and ppr but not the score statistics.
std::vector<MediaSummaryEntry> media_summary(std::span<const OpinionDocument> docs);

nlohmann::json to_json(const std::vector<TrendPoint>& series);
nlohmann::json to_json(const std::vector<RegionStat>& stats);
nlohmann::json to_json(const std::vector<MediaSummaryEntry>& summary);

}  // namespace opinion
