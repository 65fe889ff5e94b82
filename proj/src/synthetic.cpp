// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/synthetic.hpp"

#include <algorithm>
#include <cstdio>

#include "opinion/error.hpp"
#include "opinion/random.hpp"

namespace opinion::synthetic {

using nlohmann::json;

namespace {

std::vector<std::string> numbered(const char* prefix, int n) {
    std::vector<std::string> out;
    char buf[32];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "%s%02d", prefix, i);
        out.emplace_back(buf);
    }
    return out;
}

const std::vector<std::string>& positive_tokens() {
    static const auto v = numbered("pos", 20);
    return v;
}
const std::vector<std::string>& negative_tokens() {
    static const auto v = numbered("neg", 20);
    return v;
}
const std::vector<std::string>& filler_tokens() {
    static const auto v = numbered("fil", 30);
    return v;
}

const std::string& pick(const std::vector<std::string>& v, Rng& rng) { return v[rng.below(v.size())]; }

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

WordSet labelled_vocab() {
    WordSet out;
    for (const auto* set : {&positive_tokens(), &negative_tokens(), &filler_tokens()}) out.insert(set->begin(), set->end());
    out.insert("not");
    return out;
}

std::vector<LabelledDoc> separable_corpus(std::size_t n_docs, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LabelledDoc> out;
    out.reserve(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) {
        const bool positive = i % 2 == 0;
        const auto& polar = positive ? positive_tokens() : negative_tokens();
        const std::size_t length = 8 + rng.below(13);
        std::vector<std::string> tokens;
        for (std::size_t k = 0; k < length; ++k) {
            tokens.push_back(rng.uniform() < 0.4 ? pick(polar, rng) : pick(filler_tokens(), rng));
        }
        // At least one polar token per document.
        tokens[rng.below(length)] = pick(polar, rng);
        out.push_back({join(tokens) + ".", positive ? Sentiment::positive : Sentiment::negative});
    }
    return out;
}

std::vector<LabelledDoc> order_sensitive_corpus(std::size_t n_docs, double label_noise, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<LabelledDoc> out;
    out.reserve(n_docs);
    auto filler = [&](std::vector<std::string>& tokens, std::size_t max) {
        const auto n = rng.below(max + 1);
        for (std::size_t k = 0; k < n; ++k) tokens.push_back(pick(filler_tokens(), rng));
    };
    for (std::size_t i = 0; i < n_docs; ++i) {
        std::vector<std::string> tokens;
        bool positive = rng.uniform() < 0.5;
        if (i % 2 == 0) {
            const auto& polar = positive ? positive_tokens() : negative_tokens();
            filler(tokens, 3);
            tokens.push_back(pick(polar, rng));
            filler(tokens, 3);
            tokens.push_back(pick(polar, rng));
            filler(tokens, 3);
        } else {
            // `not` before the negative word makes both phrases positive, and vice versa.
            const bool positive_first = rng.uniform() < 0.5;
            std::vector<std::string> first, second;
            const std::string pos_word = pick(positive_tokens(), rng);
            const std::string neg_word = pick(negative_tokens(), rng);
            std::vector<std::string> pos_phrase{pos_word}, neg_phrase{neg_word};
            if (positive) {
                neg_phrase.insert(neg_phrase.begin(), "not");
            } else {
                pos_phrase.insert(pos_phrase.begin(), "not");
            }
            filler(tokens, 3);
            for (const auto& t : positive_first ? pos_phrase : neg_phrase) tokens.push_back(t);
            filler(tokens, 3);
            for (const auto& t : positive_first ? neg_phrase : pos_phrase) tokens.push_back(t);
            filler(tokens, 3);
        }
        if (rng.uniform() < label_noise) positive = !positive;
        out.push_back({join(tokens) + ".", positive ? Sentiment::positive : Sentiment::negative});
    }
    return out;
}

TokenCorpus cooccurrence_corpus(std::uint64_t seed) {
    Rng rng(seed);
    const auto group_a = numbered("ctxa", 6);
    const auto group_b = numbered("ctxb", 6);
    TokenCorpus corpus;
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> s;
        for (int k = 0; k < 3; ++k) s.push_back(pick(group_a, rng));
        // p and q adjacent, in either order.
        if (rng.uniform() < 0.5) {
            s.insert(s.begin() + static_cast<std::ptrdiff_t>(rng.below(4)), {"p", "q"});
        } else {
            s.insert(s.begin() + static_cast<std::ptrdiff_t>(rng.below(4)), {"q", "p"});
        }
        corpus.push_back(std::move(s));

        std::vector<std::string> t;
        for (int k = 0; k < 4; ++k) t.push_back(pick(group_b, rng));
        t.insert(t.begin() + static_cast<std::ptrdiff_t>(rng.below(5)), "r");
        corpus.push_back(std::move(t));
    }
    return corpus;
}

std::vector<RawDocument> news_items(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    struct Source {
        const char* name;
        const char* host;
    };
    static const Source kSources[] = {
        {"市场监管总局", "www.samr.example.gov.cn"}, {"地方卫健委", "wjw.example.gov.cn"},
        {"新闻日报", "news.example.com"},            {"晚报网", "www.evening.example.com"},
        {"微博", "weibo.example.com"},               {"美食论坛", "bbs.food.example.net"}};
    static const char* kPlaces[] = {"湖北", "武汉", "广东", "深圳", "河南", "郑州", "北京", "四川", "成都", "山东"};
    static const char* kFoods[] = {"牛奶", "大米", "猪肉", "奶粉", "蔬菜", "食用油"};
    static const char* kGood[] = {"质量合格", "让人放心", "非常安全", "群众满意"};
    static const char* kBad[] = {"细菌超标", "产品召回", "存在问题", "让人担心", "不合格"};

    std::vector<RawDocument> out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& src = kSources[rng.below(std::size(kSources))];
        const std::string place = kPlaces[rng.below(std::size(kPlaces))];
        const std::string food = kFoods[rng.below(std::size(kFoods))];
        const bool upbeat = rng.uniform() < 0.6;
        const auto& tone = upbeat ? kGood : kBad;
        const std::size_t tone_n = upbeat ? std::size(kGood) : std::size(kBad);

        std::string content = "<p>" + place + "抽检" + food + "，结果" + tone[rng.below(tone_n)] + "。</p>";
        content += "<p>第" + std::to_string(i + 1) + "批次" + food + "检测报告已经公布。";
        if (rng.uniform() < 0.5) content += std::string("另外") + kPlaces[rng.below(std::size(kPlaces))] + "也开展了检查。";
        content += "</p>";

        char date[40];
        std::snprintf(date, sizeof date, "2020-01-%02dT%02d:%02d:00+08:00", 15 + static_cast<int>(rng.below(10)),
                      8 + static_cast<int>(rng.below(12)), static_cast<int>(rng.below(60)));

        RawDocument raw;
        raw.url = "https://" + std::string(src.host) + "/article/" + std::to_string(1000 + i);
        raw.title = place + food + "抽检通报";
        raw.content = content;
        raw.published_at = date;
        raw.source_name = src.name;
        out.push_back(std::move(raw));
    }
    return out;
}

std::vector<OpinionDocument> incident_timeline() {
    using namespace std::chrono;
    struct Day {
        int day;
        int count;
        int positives;
    };
    // Days before the 20th stay under the neutral threshold.
    static const Day kDays[] = {{15, 3, 3}, {16, 5, 4}, {17, 2, 2}, {18, 6, 5}, {19, 8, 7},  {20, 14, 12},
                                {21, 9, 7}, {22, 40, 26}, {23, 69, 34}, {24, 45, 30}, {25, 30, 22},
                                {26, 20, 16}, {27, 52, 31}, {28, 75, 37}, {29, 33, 21}};
    static const char* kRegions[] = {"42", "42", "42", "44", "51", "11"};
    std::vector<OpinionDocument> out;
    int serial = 0;
    for (const auto& d : kDays) {
        for (int k = 0; k < d.count; ++k, ++serial) {
            OpinionDocument doc;
            doc.url = "https://timeline.example.com/" + std::to_string(serial);
            doc.id = document_id(doc.url);
            doc.title = "incident update " + std::to_string(serial);
            doc.content = doc.title;
            doc.published_at = Timestamp{sys_days{year{2020} / January / d.day}} + hours{k % 24};
            doc.media_type = kAllMediaTypes[static_cast<std::size_t>(serial) % 3];
            const bool positive = k < d.positives;
            doc.sentiment_label = positive ? Sentiment::positive : Sentiment::negative;
            doc.sentiment_score = positive ? 1.0 + (k % 3) : -1.0 - (k % 2);
            doc.regions.primary = kRegions[static_cast<std::size_t>(serial) % std::size(kRegions)];
            doc.regions.codes = {*doc.regions.primary};
            out.push_back(std::move(doc));
        }
    }
    return out;
}

json to_json(const RawDocument& raw) {
    json j = json::object();
    if (raw.url) j["url"] = *raw.url;
    if (raw.title) j["title"] = *raw.title;
    if (raw.content) j["content"] = *raw.content;
    if (raw.published_at) j["published_at"] = *raw.published_at;
    if (raw.source_name) j["source_name"] = *raw.source_name;
    if (raw.media_type) j["media_type"] = *raw.media_type;
    return j;
}

json to_json(const LabelledDoc& doc) { return {{"text", doc.text}, {"label", to_string(doc.label)}}; }

LabelledDoc labelled_from_json(const json& j) {
    const auto label = parse_sentiment(j.at("label").get<std::string>());
    if (!label) throw LoadError("label must be 'positive' or 'negative'");
    return {j.at("text").get<std::string>(), *label};
}

}  // namespace opinion::synthetic
