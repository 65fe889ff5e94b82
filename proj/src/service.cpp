// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/service.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "opinion/analytics.hpp"
#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string resolve(std::string_view value, const std::string& base_dir) {
    if (value.empty()) return {};
    fs::path p{std::string(value)};
    if (p.is_absolute()) return p.string();
    return (fs::path(base_dir) / p).lexically_normal().string();
}

int parse_int(std::string_view key, std::string_view value) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParameterError(std::string(key), std::string(key) + " must be an integer, got '" + std::string(value) + "'");
    }
    return v;
}

constexpr const char* kConfigKeys[] = {
    "data_dir",        "sentiment_lexicon", "degree_lexicon", "negation_lexicon", "stopword_lexicon",
    "gazetteer",       "source_registry",   "embedding_model", "classifier_model", "segmenter_vocab",
    "static_dir",      "bind_address",      "port",           "page_size",        "keyword_count",
    "abstract_sentences"};

void apply_environment(AppConfig& cfg, const std::string& base_dir) {
    for (const char* key : kConfigKeys) {
        std::string upper = "OPINION_";
        for (const char* c = key; *c; ++c) upper.push_back(static_cast<char>(std::toupper(*c)));
        const char* value = std::getenv(key);
        if (value == nullptr) value = std::getenv(upper.c_str());
        if (value != nullptr) cfg.set(key, value, base_dir);
    }
}

}  // namespace

void AppConfig::set(std::string_view key, std::string_view value, const std::string& base_dir) {
    const auto v = text::trim(value);
    if (key == "data_dir") {
        data_dir = resolve(v, base_dir);
    } else if (key == "sentiment_lexicon") {
        sentiment_lexicon = resolve(v, base_dir);
    } else if (key == "degree_lexicon") {
        degree_lexicon = resolve(v, base_dir);
    } else if (key == "negation_lexicon") {
        negation_lexicon = resolve(v, base_dir);
    } else if (key == "stopword_lexicon") {
        stopword_lexicon = resolve(v, base_dir);
    } else if (key == "gazetteer") {
        gazetteer = resolve(v, base_dir);
    } else if (key == "source_registry") {
        source_registry = resolve(v, base_dir);
    } else if (key == "embedding_model") {
        embedding_model = resolve(v, base_dir);
    } else if (key == "classifier_model") {
        classifier_model = resolve(v, base_dir);
    } else if (key == "segmenter_vocab") {
        segmenter_vocab = resolve(v, base_dir);
    } else if (key == "static_dir") {
        static_dir = resolve(v, base_dir);
    } else if (key == "bind_address") {
        bind_address = v;
    } else if (key == "port") {
        port = parse_int(key, v);
    } else if (key == "page_size") {
        page_size = parse_int(key, v);
    } else if (key == "keyword_count") {
        keyword_count = static_cast<std::size_t>(std::max(1, parse_int(key, v)));
    } else if (key == "abstract_sentences") {
        abstract_sentences = static_cast<std::size_t>(std::max(1, parse_int(key, v)));
    } else {
        throw LoadError("unknown configuration key '" + std::string(key) + "'");
    }
}

AppConfig AppConfig::load(const std::string& path) {
    AppConfig cfg;
    const auto base = fs::absolute(path).parent_path().string();
    cfg.data_dir = resolve("data", base);
    const auto lines = text::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = text::trim(lines[n]);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw LoadError(path + ":" + std::to_string(n + 1) + ": expected key=value");
        try {
            cfg.set(text::trim(line.substr(0, eq)), line.substr(eq + 1), base);
        } catch (const Error& e) {
            throw LoadError(path + ":" + std::to_string(n + 1) + ": " + e.what());
        }
    }
    apply_environment(cfg, fs::current_path().string());
    return cfg;
}

AppConfig AppConfig::from_environment(const std::string& base_dir) {
    AppConfig cfg;
    cfg.data_dir = resolve("data", base_dir);
    apply_environment(cfg, base_dir);
    return cfg;
}

void AppConfig::validate() const {
    if (port < 1 || port > 65535) throw ParameterError("port", "port must be in [1, 65535]");
    if (page_size < 1 || page_size > 500) throw ParameterError("page_size", "page_size must be in [1, 500]");
    const std::pair<const char*, const std::string*> files[] = {
        {"sentiment_lexicon", &sentiment_lexicon}, {"degree_lexicon", &degree_lexicon},
        {"negation_lexicon", &negation_lexicon},   {"stopword_lexicon", &stopword_lexicon},
        {"gazetteer", &gazetteer},                 {"source_registry", &source_registry},
        {"embedding_model", &embedding_model},     {"classifier_model", &classifier_model},
        {"segmenter_vocab", &segmenter_vocab}};
    for (const auto& [key, value] : files) {
        if (!value->empty() && !fs::exists(*value)) throw LoadError(std::string(key) + ": file not found: " + *value);
    }
    const int lexicon_count = !sentiment_lexicon.empty() + !degree_lexicon.empty() + !negation_lexicon.empty() +
                              !stopword_lexicon.empty();
    if (lexicon_count != 0 && lexicon_count != 4) {
        throw LoadError("either all four lexicon files or none must be configured");
    }
    if (classifier_model.empty() != embedding_model.empty() && !classifier_model.empty()) {
        throw LoadError("classifier_model requires embedding_model");
    }
}

std::string AppConfig::store_path() const { return (fs::path(data_dir) / "documents.jsonl").string(); }

LexiconPaths AppConfig::lexicon_paths() const {
    return {sentiment_lexicon, degree_lexicon, negation_lexicon, stopword_lexicon};
}

bool AppConfig::has_lexicons() const { return !sentiment_lexicon.empty(); }

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(Lexicons lexicons, Gazetteer gazetteer, SourceRegistry registry, SegmenterVocab extra_vocab)
    : lexicons_(std::move(lexicons)),
      gazetteer_(std::move(gazetteer)),
      registry_(std::move(registry)),
      vocab_(std::move(extra_vocab)) {
    vocab_.merge(lexicons_.words());
    vocab_.merge(gazetteer_.names());
}

Pipeline Pipeline::from_config(const AppConfig& config) {
    config.validate();
    Lexicons lex;
    if (config.has_lexicons()) lex = load_lexicons(config.lexicon_paths());
    Gazetteer gaz;
    if (!config.gazetteer.empty()) gaz = Gazetteer::load(config.gazetteer);
    SourceRegistry reg;
    if (!config.source_registry.empty()) reg = SourceRegistry::load(config.source_registry);
    SegmenterVocab vocab;
    if (!config.segmenter_vocab.empty()) vocab = SegmenterVocab::load(config.segmenter_vocab);
    Pipeline p(std::move(lex), std::move(gaz), std::move(reg), std::move(vocab));
    p.set_keyword_count(config.keyword_count);
    p.set_abstract_sentences(config.abstract_sentences);
    if (!config.embedding_model.empty()) {
        auto emb = EmbeddingModel::load(config.embedding_model);
        if (!config.classifier_model.empty()) {
            p.set_models(std::move(emb), ClassifierModel::load(config.classifier_model));
        } else {
            p.set_embeddings(std::move(emb));
        }
    }
    return p;
}

void Pipeline::set_embeddings(EmbeddingModel embeddings) {
    for (const auto& w : embeddings.words()) vocab_.add(w);
    embeddings_ = std::move(embeddings);
}

void Pipeline::set_models(EmbeddingModel embeddings, ClassifierModel classifier) {
    const auto input = std::visit(
        [](const auto& p) -> std::size_t {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LSTMParams>) {
                return p.input;
            } else if constexpr (std::is_same_v<P, MLPParams>) {
                return p.sizes.front();
            } else {
                return p.w.size();
            }
        },
        classifier.params);
    if (input != embeddings.dim()) {
        throw DimensionError("classifier input size " + std::to_string(input) + " does not match embedding dim " +
                             std::to_string(embeddings.dim()));
    }
    set_embeddings(std::move(embeddings));
    classifier_ = std::move(classifier);
}

std::vector<std::string> Pipeline::tokens(std::string_view text) const {
    return content_tokens(text, vocab_, lexicons_.stopwords);
}

ClassifyResult Pipeline::classify(std::string_view text) const {
    ClassifyResult r;
    r.lexicon = score_document(text, lexicons_, vocab_);
    if (classifier_ && embeddings_) r.model = predict(tokens(text), *classifier_, *embeddings_);
    return r;
}

json ClassifyResult::to_json() const {
    json per_sentence = json::array();
    for (const auto& [s, v] : lexicon.per_sentence) per_sentence.push_back({{"sentence", s}, {"score", v}});
    json out = {{"lexicon", {{"score", lexicon.score}, {"label", to_string(lexicon.label)}, {"sentences", per_sentence}}},
                {"model", nullptr}};
    if (model) out["model"] = {{"probability", model->value}, {"label", to_string(model->label)}};
    return out;
}

namespace {

std::string document_text(const OpinionDocument& doc) {
    return doc.title.empty() ? doc.content : doc.title + "\n" + doc.content;
}

}  // namespace

void Pipeline::enrich(OpinionDocument& doc) const {
    const auto full = document_text(doc);
    doc.regions = extract_regions(full, gazetteer_).info();
    doc.keywords.clear();
    for (auto& k : textrank_keywords(doc.content, keyword_count_, kKeywordWindow, vocab_, lexicons_.stopwords)) {
        doc.keywords.push_back(std::move(k.word));
    }
    doc.abstract.clear();
    for (const auto& s : textrank_abstract(doc.content, abstract_sentences_, vocab_, lexicons_.stopwords)) {
        if (!doc.abstract.empty()) doc.abstract.push_back(' ');
        doc.abstract += s;
    }
}

void Pipeline::classify(OpinionDocument& doc) const {
    const auto r = classify(document_text(doc));
    doc.sentiment_score = r.lexicon.score;
    if (r.model) {
        doc.model_probability = r.model->value;
        doc.sentiment_label = r.model->label;
    } else {
        doc.model_probability.reset();
        doc.sentiment_label = r.lexicon.label;
    }
}

// ---------------------------------------------------------------------------
// Ingestion

json IngestReport::to_json() const {
    return {{"read", read},
            {"stored", stored},
            {"rejected", rejected},
            {"rejected_reasons", rejected_reasons},
            {"duplicates", duplicates}};
}

namespace {

std::mutex& ingest_mutex() {
    static std::mutex m;
    return m;
}

void enrich_all(std::vector<OpinionDocument>& docs, const Pipeline& pipeline) {
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            pipeline.enrich(docs[i]);
            pipeline.classify(docs[i]);
        }
    };
    const std::size_t threads = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
    if (docs.size() < 64 || threads == 1) {
        work(0, docs.size());
        return;
    }
    // Each worker writes only its own slice, so the merged result is order-stable.
    std::vector<std::thread> pool;
    const std::size_t chunk = (docs.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < docs.size(); begin += chunk) {
        pool.emplace_back(work, begin, std::min(docs.size(), begin + chunk));
    }
    for (auto& t : pool) t.join();
}

}  // namespace

IngestReport ingest(std::istream& lines, CorpusStore& store, const Pipeline& pipeline) {
    IngestReport report;
    std::vector<OpinionDocument> cleaned;
    std::string line;
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    while (std::getline(lines, line)) {
        if (text::trim(line).empty()) continue;
        ++report.read;
        std::optional<RawDocument> raw;
        try {
            raw = RawDocument::from_json(json::parse(line));
        } catch (const json::exception&) {
            ++report.rejected;
            ++report.rejected_reasons[std::string(to_string(RejectReason::malformed))];
            continue;
        }
        auto result = clean_document(*raw, pipeline.registry(), now);
        if (auto* rejection = std::get_if<Rejection>(&result)) {
            ++report.rejected;
            ++report.rejected_reasons[std::string(to_string(rejection->reason))];
            continue;
        }
        cleaned.push_back(std::move(std::get<OpinionDocument>(result)));
    }

    std::lock_guard lock(ingest_mutex());
    const auto base = store.snapshot();
    std::vector<OpinionDocument> fresh;
    for (auto& doc : dedup(cleaned)) {
        if (!base->contains_url(doc.url) && !base->contains_content(content_hash(doc))) fresh.push_back(std::move(doc));
    }
    enrich_all(fresh, pipeline);
    const auto applied = store.apply(fresh);
    report.stored = applied.stored;
    report.stored_ids = applied.stored_ids;
    report.duplicates = cleaned.size() - applied.stored;
    return report;
}

IngestReport ingest_file(const std::string& path, CorpusStore& store, const Pipeline& pipeline) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot read ingest file: " + path);
    return ingest(in, store, pipeline);
}

std::size_t reclassify(CorpusStore& store, const Pipeline& pipeline) {
    std::lock_guard lock(ingest_mutex());
    auto docs = store.snapshot()->documents();
    for (auto& d : docs) pipeline.classify(d);
    const auto n = docs.size();
    store.replace_all(std::move(docs));
    return n;
}

// ---------------------------------------------------------------------------
// API

namespace {

ApiResponse bad_parameter(const ParameterError& e) {
    return {400, {{"error", "bad_parameter"}, {"field", e.field()}, {"message", e.what()}}};
}

std::optional<std::string> param(const ApiParams& params, const char* key) {
    const auto it = params.find(key);
    if (it == params.end() || text::trim(it->second).empty()) return std::nullopt;
    return it->second;
}

}  // namespace

Api::Api(CorpusStore& store, const Pipeline& pipeline, int default_page_size)
    : store_(store), pipeline_(pipeline), default_page_size_(default_page_size) {}

QueryFilter Api::parse_filter(const ApiParams& params) const {
    QueryFilter f;
    f.page_size = default_page_size_;
    if (auto q = param(params, "q")) f.keyword = *q;
    if (auto from = param(params, "from")) {
        f.from = parse_query_bound(*from, false);
        if (!f.from) throw ParameterError("from", "from must be an ISO-8601 date or date-time");
    }
    if (auto to = param(params, "to")) {
        f.to = parse_query_bound(*to, true);
        if (!f.to) throw ParameterError("to", "to must be an ISO-8601 date or date-time");
    }
    if (f.from && f.to && *f.from > *f.to) throw ParameterError("from", "from must not be after to");
    if (auto m = param(params, "media_type")) {
        f.media_type = parse_media_type(*m);
        if (!f.media_type) throw ParameterError("media_type", "media_type must be government, mass or social");
    }
    if (auto r = param(params, "region")) f.region = *r;
    if (auto p = param(params, "page")) f.page = parse_int("page", *p);
    if (auto p = param(params, "page_size")) f.page_size = parse_int("page_size", *p);
    f.validate();
    return f;
}

ApiResponse Api::documents(const ApiParams& params) const {
    try {
        const auto filter = parse_filter(params);
        const auto result = store_.snapshot()->query(filter);
        return {200,
                {{"total", result.total},
                 {"page", filter.page},
                 {"page_size", filter.page_size},
                 {"documents", result.documents}}};
    } catch (const ParameterError& e) {
        return bad_parameter(e);
    }
}

ApiResponse Api::document(std::string_view id) const {
    const auto snap = store_.snapshot();
    if (const auto* doc = snap->find(id)) return {200, *doc};
    return {404, {{"error", "not_found"}, {"id", id}}};
}

ApiResponse Api::trends(const ApiParams& params) const {
    try {
        const auto filter = parse_filter(params);
        const auto docs = store_.snapshot()->select(filter);
        std::optional<Date> from = filter.from ? std::optional(date_of(*filter.from)) : std::nullopt;
        std::optional<Date> to = filter.to ? std::optional(date_of(*filter.to)) : std::nullopt;
        if (!from || !to) {
            if (docs.empty() && !(from || to)) return {200, json::array()};
            // Documents are newest first.
            if (!to) to = docs.empty() ? *from : date_of(docs.front().published_at);
            if (!from) from = docs.empty() ? *to : date_of(docs.back().published_at);
        }
        if ((*to - *from).count() > 3660) throw ParameterError("from", "date range longer than ten years");
        return {200, to_json(trend_series(docs, *from, *to))};
    } catch (const ParameterError& e) {
        return bad_parameter(e);
    }
}

ApiResponse Api::regions(const ApiParams& params) const {
    try {
        return {200, to_json(region_stats(store_.snapshot()->select(parse_filter(params))))};
    } catch (const ParameterError& e) {
        return bad_parameter(e);
    }
}

ApiResponse Api::media_summary(const ApiParams& params) const {
    try {
        return {200, to_json(opinion::media_summary(store_.snapshot()->select(parse_filter(params))))};
    } catch (const ParameterError& e) {
        return bad_parameter(e);
    }
}

ApiResponse Api::classify(std::string_view body) const {
    const auto j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string()) {
        return bad_parameter(ParameterError("text", "body must be a JSON object with a string 'text'"));
    }
    return {200, pipeline_.classify(j["text"].get<std::string>()).to_json()};
}

ApiResponse Api::ingest(std::string_view body) {
    std::istringstream in{std::string(body)};
    return {200, opinion::ingest(in, store_, pipeline_).to_json()};
}

// ---------------------------------------------------------------------------
// HTTP transport

struct HttpServer::Impl {
    Impl(CorpusStore& store, const Pipeline& pipeline, const AppConfig& config)
        : api(store, pipeline, config.page_size), config(config) {}

    Api api;
    AppConfig config;
    httplib::Server server;
};

namespace {

ApiParams to_params(const httplib::Request& req) {
    ApiParams out;
    for (const auto& [k, v] : req.params) out.emplace(k, v);
    return out;
}

void reply(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(CorpusStore& store, const Pipeline& pipeline, const AppConfig& config)
    : impl_(std::make_unique<Impl>(store, pipeline, config)) {
    auto& srv = impl_->server;
    auto& api = impl_->api;
    srv.Get("/api/documents", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.documents(to_params(req)));
    });
    srv.Get(R"(/api/documents/([^/]+))", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.document(req.matches[1].str()));
    });
    srv.Get("/api/trends", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.trends(to_params(req)));
    });
    srv.Get("/api/regions", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.regions(to_params(req)));
    });
    srv.Get("/api/media-summary", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.media_summary(to_params(req)));
    });
    srv.Post("/api/classify", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.classify(req.body));
    });
    srv.Post("/api/ingest", [&api](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.ingest(req.body));
    });
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(json{{"error", "internal"}, {"message", message}}.dump(), "application/json");
    });
    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty()) {
            res.set_content(json{{"error", res.status == 404 ? "not_found" : "http_error"}}.dump(),
                            "application/json");
        }
    });
    if (!config.static_dir.empty()) srv.set_mount_point("/", config.static_dir);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(bool any_port) {
    auto& srv = impl_->server;
    if (any_port) {
        const int port = srv.bind_to_any_port(impl_->config.bind_address);
        if (port < 0) throw Error("cannot bind to " + impl_->config.bind_address);
        return port;
    }
    if (!srv.bind_to_port(impl_->config.bind_address, impl_->config.port)) {
        throw Error("cannot bind to " + impl_->config.bind_address + ":" + std::to_string(impl_->config.port));
    }
    return impl_->config.port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace opinion
