// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/document.hpp"

#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

using nlohmann::json;

std::string_view to_string(MediaType m) {
    switch (m) {
        case MediaType::government:
            return "government";
        case MediaType::mass:
            return "mass";
        case MediaType::social:
            return "social";
    }
    return "mass";
}

std::optional<MediaType> parse_media_type(std::string_view s) {
    for (auto m : kAllMediaTypes) {
        if (to_string(m) == s) return m;
    }
    return std::nullopt;
}

std::string_view to_string(Sentiment s) { return s == Sentiment::positive ? "positive" : "negative"; }

std::optional<Sentiment> parse_sentiment(std::string_view s) {
    if (s == "positive") return Sentiment::positive;
    if (s == "negative") return Sentiment::negative;
    return std::nullopt;
}

namespace {

std::optional<std::string> optional_string(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

}  // namespace

RawDocument RawDocument::from_json(const json& j) {
    if (!j.is_object()) throw json::type_error::create(302, "document must be a JSON object", &j);
    RawDocument raw;
    raw.url = optional_string(j, "url");
    raw.title = optional_string(j, "title");
    raw.content = optional_string(j, "content");
    raw.published_at = optional_string(j, "published_at");
    raw.source_name = optional_string(j, "source_name");
    raw.media_type = optional_string(j, "media_type");
    return raw;
}

RawDocument RawDocument::from(const OpinionDocument& doc) {
    RawDocument raw;
    raw.url = doc.url;
    raw.title = doc.title;
    raw.content = doc.content;
    raw.published_at = format_timestamp(doc.published_at);
    raw.source_name = doc.source_name;
    raw.media_type = std::string(to_string(doc.media_type));
    return raw;
}

std::string document_id(std::string_view url) { return text::to_hex(text::fnv1a64(url)); }

std::uint64_t content_hash(const OpinionDocument& doc) {
    const auto h = text::fnv1a64(text::normalize(doc.title));
    return text::fnv1a64("\x1f" + text::normalize(doc.content), h);
}

void to_json(json& j, const OpinionDocument& doc) {
    j = json::object();
    j["id"] = doc.id;
    j["title"] = doc.title;
    j["content"] = doc.content;
    j["published_at"] = format_timestamp(doc.published_at);
    j["source_name"] = doc.source_name;
    j["media_type"] = to_string(doc.media_type);
    j["url"] = doc.url;
    j["abstract"] = doc.abstract;
    j["keywords"] = doc.keywords;
    j["regions"] = {{"codes", doc.regions.codes},
                    {"primary", doc.regions.primary ? json(*doc.regions.primary) : json(nullptr)}};
    j["sentiment_label"] = doc.sentiment_label ? json(to_string(*doc.sentiment_label)) : json(nullptr);
    j["sentiment_score"] = doc.sentiment_score ? json(*doc.sentiment_score) : json(nullptr);
    j["model_probability"] = doc.model_probability ? json(*doc.model_probability) : json(nullptr);
}

void from_json(const json& j, OpinionDocument& doc) {
    doc.id = j.at("id").get<std::string>();
    doc.title = j.at("title").get<std::string>();
    doc.content = j.at("content").get<std::string>();
    const auto ts = parse_timestamp(j.at("published_at").get<std::string>());
    if (!ts) throw LoadError("bad published_at in stored document " + doc.id);
    doc.published_at = *ts;
    doc.source_name = j.value("source_name", "");
    const auto media = parse_media_type(j.at("media_type").get<std::string>());
    if (!media) throw LoadError("bad media_type in stored document " + doc.id);
    doc.media_type = *media;
    doc.url = j.at("url").get<std::string>();
    doc.abstract = j.value("abstract", "");
    doc.keywords = j.value("keywords", std::vector<std::string>{});
    doc.regions = {};
    if (const auto it = j.find("regions"); it != j.end() && it->is_object()) {
        doc.regions.codes = it->value("codes", std::vector<std::string>{});
        if (const auto p = it->find("primary"); p != it->end() && !p->is_null()) {
            doc.regions.primary = p->get<std::string>();
        }
    }
    doc.sentiment_label.reset();
    if (const auto it = j.find("sentiment_label"); it != j.end() && !it->is_null()) {
        doc.sentiment_label = parse_sentiment(it->get<std::string>());
        if (!doc.sentiment_label) throw LoadError("bad sentiment_label in stored document " + doc.id);
    }
    doc.sentiment_score.reset();
    if (const auto it = j.find("sentiment_score"); it != j.end() && !it->is_null()) {
        doc.sentiment_score = it->get<double>();
    }
    doc.model_probability.reset();
    if (const auto it = j.find("model_probability"); it != j.end() && !it->is_null()) {
        doc.model_probability = it->get<double>();
    }
}

}  // namespace opinion
