// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/corpus_store.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

using nlohmann::json;

SourceRegistry SourceRegistry::load(const std::string& path) {
    SourceRegistry reg;
    const auto lines = text::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = text::trim(lines[n]);
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) {
            throw LoadError(path + ":" + std::to_string(n + 1) + ": expected source_name,media_type");
        }
        const auto name = text::trim(std::string_view(line).substr(0, comma));
        const auto type = text::trim(std::string_view(line).substr(comma + 1));
        if (n == 0 && name == "source_name" && type == "media_type") continue;
        const auto media = parse_media_type(type);
        if (!media || name.empty()) {
            throw LoadError(path + ":" + std::to_string(n + 1) + ": unknown media type '" + type + "'");
        }
        reg.add(name, *media);
    }
    return reg;
}

void SourceRegistry::add(std::string source, MediaType type) { entries_[std::move(source)] = type; }

std::string url_host(std::string_view url) {
    auto rest = url;
    if (const auto scheme = rest.find("://"); scheme != std::string_view::npos) rest = rest.substr(scheme + 3);
    rest = rest.substr(0, rest.find_first_of("/?#"));
    if (const auto at = rest.rfind('@'); at != std::string_view::npos) rest = rest.substr(at + 1);
    rest = rest.substr(0, rest.find(':'));
    std::string host(rest);
    for (auto& c : host) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c | 0x20);
    }
    return host;
}

std::optional<MediaType> SourceRegistry::resolve(std::string_view source_name, std::string_view url) const {
    if (!source_name.empty()) {
        if (const auto it = entries_.find(std::string(source_name)); it != entries_.end()) return it->second;
    }
    auto host = url_host(url);
    if (host.empty()) return std::nullopt;
    if (const auto it = entries_.find(host); it != entries_.end()) return it->second;
    if (host.rfind("www.", 0) == 0) {
        if (const auto it = entries_.find(host.substr(4)); it != entries_.end()) return it->second;
    }
    return std::nullopt;
}

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::empty_content:
            return "empty_content";
        case RejectReason::bad_timestamp:
            return "bad_timestamp";
        case RejectReason::missing_url:
            return "missing_url";
        case RejectReason::malformed:
            return "malformed";
        case RejectReason::unknown_source:
            return "unknown_source";
    }
    return "malformed";
}

CleanResult clean_document(const RawDocument& raw, const SourceRegistry& registry, Timestamp now) {
    using namespace std::chrono;
    const auto url = raw.url ? text::trim(*raw.url) : std::string{};
    if (url.empty()) return Rejection{RejectReason::missing_url, "url is missing or empty"};

    OpinionDocument doc;
    doc.url = url;
    doc.id = document_id(url);
    doc.title = text::normalize(raw.title.value_or(""));
    doc.content = text::normalize(raw.content.value_or(""));
    if (doc.content.empty()) return Rejection{RejectReason::empty_content, "content is empty after cleaning"};

    const auto ts = raw.published_at ? parse_timestamp(text::trim(*raw.published_at)) : std::nullopt;
    if (!ts) return Rejection{RejectReason::bad_timestamp, "published_at missing or unparseable"};
    const Timestamp earliest{sys_days{year{1990} / January / 1}};
    if (*ts < earliest || *ts > now + days{1}) {
        return Rejection{RejectReason::bad_timestamp, "published_at out of range: " + format_timestamp(*ts)};
    }
    doc.published_at = *ts;
    doc.source_name = text::normalize(raw.source_name.value_or(""));

    std::optional<MediaType> media;
    if (raw.media_type && !text::trim(*raw.media_type).empty()) {
        media = parse_media_type(text::trim(*raw.media_type));
        if (!media) return Rejection{RejectReason::unknown_source, "unknown media_type '" + *raw.media_type + "'"};
    } else {
        media = registry.resolve(doc.source_name, doc.url);
    }
    if (!media) return Rejection{RejectReason::unknown_source, "no registry entry for source '" + doc.source_name + "'"};
    doc.media_type = *media;
    return doc;
}

std::vector<OpinionDocument> dedup(const std::vector<OpinionDocument>& batch) {
    std::unordered_set<std::string> urls;
    std::unordered_set<std::uint64_t> hashes;
    std::vector<OpinionDocument> out;
    for (const auto& doc : batch) {
        const auto h = content_hash(doc);
        if (urls.count(doc.url) || hashes.count(h)) continue;
        urls.insert(doc.url);
        hashes.insert(h);
        out.push_back(doc);
    }
    return out;
}

void QueryFilter::validate() const {
    if (page < 1) throw ParameterError("page", "page must be >= 1");
    if (page_size < 1 || page_size > 500) throw ParameterError("page_size", "page_size must be in [1, 500]");
}

std::optional<Timestamp> parse_query_bound(std::string_view s, bool upper) {
    const auto trimmed = text::trim(s);
    if (upper && trimmed.size() == 10) {
        if (const auto d = parse_date(trimmed)) {
            return Timestamp{*d + std::chrono::days{1}} - std::chrono::seconds{1};
        }
    }
    return parse_timestamp(trimmed);
}

namespace {

bool newest_first(const OpinionDocument& a, const OpinionDocument& b) {
    if (a.published_at != b.published_at) return a.published_at > b.published_at;
    return a.id < b.id;
}

}  // namespace

StoreSnapshot::StoreSnapshot(std::vector<OpinionDocument> docs) : docs_(std::move(docs)) {
    std::stable_sort(docs_.begin(), docs_.end(), newest_first);
    by_id_.reserve(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        by_id_.emplace(docs_[i].id, i);
        urls_.insert(docs_[i].url);
        hashes_.insert(content_hash(docs_[i]));
    }
}

bool StoreSnapshot::matches(const OpinionDocument& doc, const QueryFilter& filter) const {
    if (filter.from && doc.published_at < *filter.from) return false;
    if (filter.to && doc.published_at > *filter.to) return false;
    if (filter.media_type && doc.media_type != *filter.media_type) return false;
    if (filter.region && doc.regions.primary != filter.region) return false;
    if (filter.keyword) {
        const auto kw = text::normalize(*filter.keyword);
        if (!kw.empty() && doc.title.find(kw) == std::string::npos && doc.content.find(kw) == std::string::npos) {
            return false;
        }
    }
    return true;
}

QueryResult StoreSnapshot::query(const QueryFilter& filter) const {
    filter.validate();
    QueryResult result;
    const auto skip = static_cast<std::size_t>(filter.page - 1) * static_cast<std::size_t>(filter.page_size);
    for (const auto& doc : docs_) {
        if (!matches(doc, filter)) continue;
        if (result.total >= skip && result.documents.size() < static_cast<std::size_t>(filter.page_size)) {
            result.documents.push_back(doc);
        }
        ++result.total;
    }
    return result;
}

std::vector<OpinionDocument> StoreSnapshot::select(const QueryFilter& filter) const {
    std::vector<OpinionDocument> out;
    for (const auto& doc : docs_) {
        if (matches(doc, filter)) out.push_back(doc);
    }
    return out;
}

const OpinionDocument* StoreSnapshot::find(std::string_view id) const {
    const auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

CorpusStore::CorpusStore() : current_(std::make_shared<const StoreSnapshot>()) {}

CorpusStore::CorpusStore(std::string path) : path_(std::move(path)) {
    std::vector<OpinionDocument> docs;
    if (std::filesystem::exists(path_)) {
        const auto lines = text::read_lines(path_);
        for (std::size_t n = 0; n < lines.size(); ++n) {
            if (text::trim(lines[n]).empty()) continue;
            try {
                docs.push_back(json::parse(lines[n]).get<OpinionDocument>());
            } catch (const json::exception& e) {
                throw LoadError(path_ + ":" + std::to_string(n + 1) + ": " + e.what());
            }
        }
    }
    current_ = std::make_shared<const StoreSnapshot>(std::move(docs));
}

std::shared_ptr<const StoreSnapshot> CorpusStore::snapshot() const {
    std::lock_guard lock(read_mutex_);
    return current_;
}

void CorpusStore::publish(std::shared_ptr<const StoreSnapshot> next) {
    std::lock_guard lock(read_mutex_);
    current_ = std::move(next);
}

CorpusStore::ApplyResult CorpusStore::apply(const std::vector<OpinionDocument>& batch) {
    std::lock_guard writer(write_mutex_);
    const auto base = snapshot();
    ApplyResult result;
    std::vector<OpinionDocument> fresh;
    for (const auto& doc : dedup(batch)) {
        if (base->contains_url(doc.url) || base->contains_content(content_hash(doc))) continue;
        fresh.push_back(doc);
    }
    result.stored = fresh.size();
    result.duplicates = batch.size() - fresh.size();
    if (fresh.empty()) return result;

    if (!path_.empty()) {
        if (const auto dir = std::filesystem::path(path_).parent_path(); !dir.empty()) {
            std::filesystem::create_directories(dir);
        }
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        if (!out) throw Error("cannot append to store file " + path_);
        for (const auto& doc : fresh) out << json(doc).dump() << '\n';
        out.flush();
        if (!out) throw Error("write failed on store file " + path_);
    }

    std::vector<OpinionDocument> all = base->documents();
    for (auto& doc : fresh) {
        result.stored_ids.push_back(doc.id);
        all.push_back(std::move(doc));
    }
    publish(std::make_shared<const StoreSnapshot>(std::move(all)));
    return result;
}

void CorpusStore::replace_all(std::vector<OpinionDocument> docs) {
    std::lock_guard writer(write_mutex_);
    if (!path_.empty()) {
        const auto tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
            if (!out) throw Error("cannot write " + tmp);
            for (const auto& doc : docs) out << json(doc).dump() << '\n';
            if (!out) throw Error("write failed on " + tmp);
        }
        std::filesystem::rename(tmp, path_);
    }
    publish(std::make_shared<const StoreSnapshot>(std::move(docs)));
}

}  // namespace opinion
