// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opinion/timeutil.hpp"

namespace opinion {

enum class MediaType { government, mass, social };

inline constexpr MediaType kAllMediaTypes[] = {MediaType::government, MediaType::mass, MediaType::social};

std::string_view to_string(MediaType m);
std::optional<MediaType> parse_media_type(std::string_view s);

enum class Sentiment { positive, negative };

std::string_view to_string(Sentiment s);
std::optional<Sentiment> parse_sentiment(std::string_view s);

/// Province codes mentioned by a document, in first-mention order, plus the primary one.
struct RegionInfo {
    std::vector<std::string> codes;
    std::optional<std::string> primary;

    bool operator==(const RegionInfo&) const = default;
};

struct OpinionDocument {
    std::string id;
    std::string title;
    std::string content;
    Timestamp published_at{};
    std::string source_name;
    MediaType media_type = MediaType::mass;
    std::string url;

    // Enrichment.
    std::string abstract;
    std::vector<std::string> keywords;
    RegionInfo regions;

    // Classification. When model_probability is set the label came from the neural
    // model; otherwise it came from the lexicon scorer and agrees with sentiment_score.
    std::optional<Sentiment> sentiment_label;
    std::optional<double> sentiment_score;
    std::optional<double> model_probability;

    bool operator==(const OpinionDocument&) const = default;
};

/// A document as it arrives from a feed: every field optional, nothing validated.
struct RawDocument {
    std::optional<std::string> url;
    std::optional<std::string> title;
    std::optional<std::string> content;
    std::optional<std::string> published_at;
    std::optional<std::string> source_name;
    std::optional<std::string> media_type;

    /// Throws nlohmann::json::exception when `j` is not an object or a field has the wrong type.
    static RawDocument from_json(const nlohmann::json& j);
    static RawDocument from(const OpinionDocument& doc);
};

/// Stable id derived from the url.
std::string document_id(std::string_view url);

/// Hash of the normalized title and content, used for duplicate detection.
std::uint64_t content_hash(const OpinionDocument& doc);

void to_json(nlohmann::json& j, const OpinionDocument& doc);
void from_json(const nlohmann::json& j, OpinionDocument& doc);

}  // namespace opinion
