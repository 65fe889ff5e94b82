// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "opinion/analytics.hpp"
#include "opinion/error.hpp"
#include "opinion/random.hpp"
#include "opinion/synthetic.hpp"
#include "opinion/timeutil.hpp"

using namespace opinion;
using Catch::Matchers::WithinAbs;
using std::chrono::days;
using std::chrono::hours;

namespace {

Date day(int d) { return Date{std::chrono::year{2020} / std::chrono::January / d}; }

OpinionDocument doc(int serial, Date date, bool positive, std::optional<std::string> region = {},
                    MediaType media = MediaType::mass, std::optional<double> score = {}) {
    OpinionDocument d;
    d.id = "doc" + std::to_string(serial);
    d.url = "https://example.com/" + std::to_string(serial);
    d.title = d.id;
    d.published_at = Timestamp{date} + hours{serial % 24};
    d.sentiment_label = positive ? Sentiment::positive : Sentiment::negative;
    d.sentiment_score = score;
    d.media_type = media;
    if (region) {
        d.regions.primary = region;
        d.regions.codes = {*region};
    }
    return d;
}

std::vector<OpinionDocument> cohort(const std::string& region, int count, int positives, int& serial) {
    std::vector<OpinionDocument> out;
    for (int i = 0; i < count; ++i) out.push_back(doc(serial++, day(1), i < positives, region));
    return out;
}

// Independent statistics, written as direct recounts over the document list.
double recount_ppr(const std::vector<const OpinionDocument*>& group) {
    if (group.size() < 11) return 0.5;
    double pos = 0;
    for (const auto* d : group) pos += d->sentiment_label == Sentiment::positive ? 1 : 0;
    return pos / static_cast<double>(group.size());
}

double hinge_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    if (n % 2) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("ppr examples and the small-cohort sentinel") {
    for (std::size_t n = 0; n <= 10; ++n) {
        for (std::size_t k = 0; k <= n; ++k) CHECK(ppr(k, n) == 0.5);
    }
    CHECK(ppr(11, 11) == 1.0);
    CHECK(ppr(0, 11) == 0.0);
    CHECK(ppr(13, 20) == 0.65);

    std::vector<OpinionDocument> ten;
    for (int i = 0; i < 10; ++i) ten.push_back(doc(i, day(1), false));
    CHECK(ppr(ten) == 0.5);
    ten.push_back(doc(10, day(1), true));
    CHECK(ppr(ten) == 1.0 / 11.0);

    // Unlabelled documents count toward the size only.
    std::vector<OpinionDocument> mixed;
    for (int i = 0; i < 12; ++i) mixed.push_back(doc(i, day(1), true));
    mixed[0].sentiment_label.reset();
    CHECK(ppr(mixed) == 11.0 / 12.0);
}

TEST_CASE("trend_series examples") {
    const auto empty = trend_series({}, day(1), day(3));
    REQUIRE(empty.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(empty[i].date == day(1) + days{static_cast<long>(i)});
        CHECK(empty[i].count == 0);
        CHECK(empty[i].ppr == 0.5);
    }

    std::vector<OpinionDocument> docs;
    for (int i = 0; i < 12; ++i) docs.push_back(doc(i, day(2), true));
    docs.push_back(doc(99, day(9), false));  // outside the range
    const auto series = trend_series(docs, day(1), day(3));
    REQUIRE(series.size() == 3);
    CHECK(series[0].count == 0);
    CHECK(series[1].count == 12);
    CHECK(series[1].ppr == 1.0);
    CHECK(series[2].ppr == 0.5);

    CHECK(trend_series(docs, day(2), day(2)).size() == 1);
    CHECK_THROWS_AS(trend_series(docs, day(3), day(2)), ParameterError);
}

TEST_CASE("days are bucketed in UTC") {
    auto d = doc(0, day(5), true);
    d.published_at = *parse_timestamp("2020-01-05T07:30:00+08:00");  // 23:30 UTC on the 4th
    const std::vector<OpinionDocument> docs{d};
    const auto series = trend_series(docs, day(4), day(5));
    CHECK(series[0].count == 1);
    CHECK(series[1].count == 0);
}

TEST_CASE("incident timeline spike") {
    const auto docs = synthetic::incident_timeline();
    const auto series = trend_series(docs, day(15), day(29));
    REQUIRE(series.size() == 15);

    const auto& spike = series[8];
    CHECK(format_date(spike.date) == "2020-01-23");
    CHECK(spike.count == 69);
    CHECK(spike.ppr == 34.0 / 69.0);
    CHECK(std::round(spike.ppr * 1e4) / 1e4 == 0.4928);

    std::size_t total = 0;
    for (const auto& p : series) {
        total += p.count;
        if (p.count <= 10) CHECK(p.ppr == 0.5);
    }
    CHECK(total == docs.size());
    // The quiet days before the first rise all sit at the sentinel.
    for (std::size_t i = 0; i < 5; ++i) CHECK(series[i].ppr == 0.5);
    CHECK(series[5].ppr == 12.0 / 14.0);
}

TEST_CASE("region_stats examples") {
    int serial = 0;
    std::vector<OpinionDocument> docs;
    for (auto part : {cohort("A", 50, 40, serial), cohort("B", 30, 3, serial), cohort("C", 20, 20, serial)}) {
        docs.insert(docs.end(), part.begin(), part.end());
    }
    const auto full = region_stats(docs);
    REQUIRE(full.size() == 3);
    CHECK(full[0].region == "A");
    CHECK(full[0].attention == 0.5);
    CHECK(full[0].ppr == 0.8);
    CHECK(full[1].ppr == 0.1);
    CHECK(full[2].attention == 0.2);

    docs.erase(docs.begin() + 80, docs.end());
    for (int i = 0; i < 20; ++i) docs.push_back(doc(serial++, day(1), true));
    const auto partial = region_stats(docs);
    REQUIRE(partial.size() == 2);
    CHECK(partial[0].attention == 0.5);
    CHECK(partial[1].attention == 0.3);
    CHECK(partial[0].attention + partial[1].attention < 1.0);

    const auto small = region_stats(cohort("D", 8, 8, serial));
    REQUIRE(small.size() == 1);
    CHECK(small[0].ppr == 0.5);
    CHECK(small[0].attention == 1.0);

    CHECK(region_stats({}).empty());
}

TEST_CASE("region ties order by code") {
    int serial = 0;
    auto docs = cohort("51", 3, 0, serial);
    const auto more = cohort("11", 3, 0, serial);
    docs.insert(docs.end(), more.begin(), more.end());
    const auto stats = region_stats(docs);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].region == "11");
}

TEST_CASE("box_stats examples") {
    CHECK_FALSE(box_stats({}).has_value());

    const auto even = *box_stats({4, 1, 3, 2});
    CHECK(even.min == 1);
    CHECK(even.q1 == 1.5);
    CHECK(even.median == 2.5);
    CHECK(even.q3 == 3.5);
    CHECK(even.max == 4);

    const auto sym = *box_stats({-1, 0, 1});
    CHECK(sym.min == -1);
    CHECK(sym.median == 0);
    CHECK(sym.max == 1);
    CHECK(sym.q1 == -0.5);
    CHECK(sym.q3 == 0.5);

    const auto one = *box_stats({7});
    CHECK(one.q1 == 7);
    CHECK(one.q3 == 7);
}

TEST_CASE("media_summary examples") {
    std::vector<OpinionDocument> docs;
    for (int i = 0; i < 12; ++i) {
        docs.push_back(doc(i, day(1), i < 9, {}, MediaType::government, static_cast<double>(i % 5) - 2.0));
    }
    docs.push_back(doc(20, day(1), false, {}, MediaType::social, -4.0));
    docs.push_back(doc(21, day(1), true, {}, MediaType::social));  // no score

    const auto summary = media_summary(docs);
    REQUIRE(summary.size() == 3);
    CHECK(summary[0].media_type == MediaType::government);
    CHECK(summary[1].media_type == MediaType::mass);
    CHECK(summary[2].media_type == MediaType::social);

    CHECK(summary[0].count == 12);
    CHECK(summary[0].ppr == 0.75);
    CHECK(summary[1].count == 0);
    CHECK_FALSE(summary[1].box.has_value());
    CHECK(summary[2].count == 2);
    CHECK(summary[2].ppr == 0.5);

    // The limit is shared across media types.
    for (const auto& e : summary) CHECK(e.histogram_limit == 4.0);
    // -4 is the lowest edge, +4 would be the highest; 0 lands in the middle bin.
    CHECK(summary[2].histogram[0] == 1);
    std::size_t scored = 0;
    for (auto c : summary[2].histogram) scored += c;
    CHECK(scored == 1);
    std::size_t gov = 0;
    for (auto c : summary[0].histogram) gov += c;
    CHECK(gov == 12);

    // Scores -2..2 over limit 4: bin = floor((s + 4) * 21 / 8).
    CHECK(summary[0].histogram[5] == 3);   // -2 -> 5.25
    CHECK(summary[0].histogram[7] == 3);   // -1 -> 7.875
    CHECK(summary[0].histogram[10] == 2);  // 0 -> 10.5
    CHECK(summary[0].histogram[13] == 2);  // 1 -> 13.125
    CHECK(summary[0].histogram[15] == 2);  // 2 -> 15.75
}

TEST_CASE("all-zero scores fall in the middle bin") {
    std::vector<OpinionDocument> docs;
    for (int i = 0; i < 4; ++i) docs.push_back(doc(i, day(1), false, {}, MediaType::mass, 0.0));
    const auto summary = media_summary(docs);
    CHECK(summary[1].histogram_limit == 0.0);
    CHECK(summary[1].histogram[kHistogramBins / 2] == 4);
}

TEST_CASE("json layouts") {
    const auto series = to_json(trend_series({}, day(1), day(1)));
    CHECK(series.dump() == R"([{"count":0,"date":"2020-01-01","ppr":0.5}])");

    int serial = 0;
    const auto regions = to_json(region_stats(cohort("42", 2, 1, serial)));
    CHECK(regions[0]["region"] == "42");
    CHECK(regions[0]["attention"] == 1.0);

    const auto media = to_json(media_summary({}));
    REQUIRE(media.size() == 3);
    CHECK(media[0]["media_type"] == "government");
    CHECK(media[0]["box_stats"].is_null());
    CHECK(media[0]["histogram"]["bins"].size() == kHistogramBins);
}

TEST_CASE("all statistics match an independent recount on random fixtures") {
    Rng rng(41);
    const std::vector<std::string> regions{"11", "42", "44", "51"};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<OpinionDocument> docs;
        const auto n = rng.below(120);
        const double p_pos = rng.uniform();
        for (std::size_t i = 0; i < n; ++i) {
            std::optional<std::string> region;
            if (rng.uniform() < 0.8) region = regions[rng.below(regions.size())];
            std::optional<double> score;
            // Quarter steps keep bin edges exactly representable.
            if (rng.uniform() < 0.9) score = static_cast<double>(static_cast<int>(rng.below(41)) - 20) / 4.0;
            docs.push_back(doc(static_cast<int>(i), day(1 + static_cast<int>(rng.below(10))), rng.uniform() < p_pos,
                               region, kAllMediaTypes[rng.below(3)], score));
        }

        // Daily counts.
        const auto series = trend_series(docs, day(1), day(10));
        std::map<std::string, std::vector<const OpinionDocument*>> by_day;
        for (const auto& d : docs) by_day[format_date(date_of(d.published_at))].push_back(&d);
        std::size_t total = 0;
        for (const auto& p : series) {
            const auto& group = by_day[format_date(p.date)];
            CHECK(p.count == group.size());
            CHECK(p.ppr == recount_ppr(group));
            total += p.count;
        }
        CHECK(total == docs.size());

        // Regions.
        const auto stats = region_stats(docs);
        double attention = 0.0;
        std::size_t regionless = 0;
        for (const auto& d : docs) regionless += d.regions.primary ? 0 : 1;
        for (const auto& s : stats) {
            std::vector<const OpinionDocument*> group;
            for (const auto& d : docs) {
                if (d.regions.primary == s.region) group.push_back(&d);
            }
            CHECK(s.count == group.size());
            CHECK(s.ppr == recount_ppr(group));
            CHECK(s.attention == static_cast<double>(group.size()) / static_cast<double>(docs.size()));
            attention += s.attention;
        }
        for (std::size_t i = 1; i < stats.size(); ++i) {
            CHECK((stats[i - 1].count > stats[i].count ||
                   (stats[i - 1].count == stats[i].count && stats[i - 1].region < stats[i].region)));
        }
        if (!docs.empty()) {
            CHECK_THAT(attention + static_cast<double>(regionless) / static_cast<double>(docs.size()),
                       WithinAbs(1.0, 1e-12));
        }

        // Media summaries. Limit and bins in quarter units, as integers.
        int limit4 = 0;
        for (const auto& d : docs) {
            if (d.sentiment_score) limit4 = std::max(limit4, static_cast<int>(std::abs(*d.sentiment_score) * 4));
        }
        const auto summary = media_summary(docs);
        for (const auto& e : summary) {
            std::vector<const OpinionDocument*> group;
            std::vector<double> scores;
            std::array<std::size_t, kHistogramBins> bins{};
            for (const auto& d : docs) {
                if (d.media_type != e.media_type) continue;
                group.push_back(&d);
                if (!d.sentiment_score) continue;
                scores.push_back(*d.sentiment_score);
                const int s4 = static_cast<int>(*d.sentiment_score * 4);
                int bin = limit4 == 0 ? 10 : (s4 + limit4) * 21 / (2 * limit4);
                ++bins[static_cast<std::size_t>(std::min(bin, 20))];
            }
            CHECK(e.count == group.size());
            CHECK(e.ppr == recount_ppr(group));
            CHECK(e.histogram_limit * 4 == limit4);
            CHECK(e.histogram == bins);
            REQUIRE(e.box.has_value() == !scores.empty());
            if (scores.empty()) continue;
            std::sort(scores.begin(), scores.end());
            const auto half = (scores.size() + 1) / 2;
            CHECK(e.box->min == scores.front());
            CHECK(e.box->max == scores.back());
            CHECK(e.box->median == hinge_median(scores));
            CHECK(e.box->q1 == hinge_median({scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(half)}));
            CHECK(e.box->q3 == hinge_median({scores.end() - static_cast<std::ptrdiff_t>(half), scores.end()}));
            CHECK(e.box->q1 <= e.box->median);
            CHECK(e.box->median <= e.box->q3);
        }
    }
}
