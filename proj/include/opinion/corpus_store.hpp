// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "opinion/document.hpp"

namespace opinion {

/// Maps a source name or url host to its media category.
class SourceRegistry {
public:
    SourceRegistry() = default;

    /// CSV `source_name,media_type`; an optional header row with those names is skipped.
    static SourceRegistry load(const std::string& path);

    void add(std::string source, MediaType type);

    /// Looks up the source name first, then the url host (with and without a leading `www.`).
    std::optional<MediaType> resolve(std::string_view source_name, std::string_view url) const;

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, MediaType>& entries() const { return entries_; }

private:
    std::map<std::string, MediaType> entries_;
};

/// Host part of a url: scheme, credentials, port and path removed, lowercased.
std::string url_host(std::string_view url);

enum class RejectReason { empty_content, bad_timestamp, missing_url, malformed, unknown_source };

std::string_view to_string(RejectReason r);

struct Rejection {
    RejectReason reason;
    std::string detail;
};

using CleanResult = std::variant<OpinionDocument, Rejection>;

/// Strips markup, normalizes whitespace, validates the url and timestamp and resolves the
/// media type (explicit per-document value first, then the registry). `now` bounds the
/// accepted publication time to [1990-01-01, now + 1 day].
CleanResult clean_document(const RawDocument& raw, const SourceRegistry& registry,
                           Timestamp now = std::chrono::floor<std::chrono::seconds>(
                               std::chrono::system_clock::now()));

/// Drops every document whose url or content hash was already seen earlier in the batch.
std::vector<OpinionDocument> dedup(const std::vector<OpinionDocument>& batch);

struct QueryFilter {
    std::optional<std::string> keyword;
    std::optional<Timestamp> from;
    std::optional<Timestamp> to;
    std::optional<MediaType> media_type;
    /// Matches the document's primary region.
    std::optional<std::string> region;
    int page = 1;
    int page_size = 20;

    /// Throws ParameterError naming `page` or `page_size`.
    void validate() const;
};

/// Parses a query bound. A date-only upper bound covers its whole day.
std::optional<Timestamp> parse_query_bound(std::string_view s, bool upper);

struct QueryResult {
    std::size_t total = 0;
    std::vector<OpinionDocument> documents;
};

/// Immutable view of the store. Documents are kept newest first, ties by id ascending.
class StoreSnapshot {
public:
    StoreSnapshot() = default;
    explicit StoreSnapshot(std::vector<OpinionDocument> docs);

    bool matches(const OpinionDocument& doc, const QueryFilter& filter) const;

    /// Paged query; validates the filter first.
    QueryResult query(const QueryFilter& filter) const;

    /// Every match, paging ignored.
    std::vector<OpinionDocument> select(const QueryFilter& filter) const;

    const OpinionDocument* find(std::string_view id) const;
    bool contains_url(const std::string& url) const { return urls_.count(url) != 0; }
    bool contains_content(std::uint64_t hash) const { return hashes_.count(hash) != 0; }

    const std::vector<OpinionDocument>& documents() const { return docs_; }
    std::size_t size() const { return docs_.size(); }

private:
    std::vector<OpinionDocument> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_set<std::string> urls_;
    std::unordered_set<std::uint64_t> hashes_;
};

/// Single-writer, multi-reader document store persisted as JSON Lines.
///
/// Readers take a snapshot and keep it as long as they like; `apply` builds the next
/// snapshot, appends the new records to disk and then publishes it in one step.
class CorpusStore {
public:
    /// In-memory only.
    CorpusStore();
    /// Loads (or creates on first write) the JSONL file at `path`.
    explicit CorpusStore(std::string path);

    std::shared_ptr<const StoreSnapshot> snapshot() const;

    struct ApplyResult {
        std::size_t stored = 0;
        std::size_t duplicates = 0;
        std::vector<std::string> stored_ids;
    };

    /// Adds documents not already present by url or content hash. First writer wins.
    ApplyResult apply(const std::vector<OpinionDocument>& batch);

    /// Rewrites every document (used when re-running classification). Urls must be unchanged.
    void replace_all(std::vector<OpinionDocument> docs);

    const std::string& path() const { return path_; }

private:
    void publish(std::shared_ptr<const StoreSnapshot> next);

    std::string path_;
    mutable std::mutex read_mutex_;
    std::mutex write_mutex_;
    std::shared_ptr<const StoreSnapshot> current_;
};

}  // namespace opinion
