// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opinion/classifiers.hpp"
#include "opinion/corpus_store.hpp"
#include "opinion/embeddings.hpp"
#include "opinion/enrichment.hpp"
#include "opinion/lexicon.hpp"
#include "opinion/segmenter.hpp"

namespace opinion {

/// Flat key=value configuration. Relative paths are resolved against the directory of
/// the config file. An environment variable named like a key, or `OPINION_` plus the
/// upper-cased key, overrides the file.
struct AppConfig {
    std::string data_dir = "data";
    std::string sentiment_lexicon;
    std::string degree_lexicon;
    std::string negation_lexicon;
    std::string stopword_lexicon;
    std::string gazetteer;
    std::string source_registry;
    std::string embedding_model;
    std::string classifier_model;
    std::string segmenter_vocab;
    std::string static_dir;
    std::string bind_address = "127.0.0.1";
    int port = 8080;
    int page_size = 20;
    std::size_t keyword_count = 5;
    std::size_t abstract_sentences = 2;

    static AppConfig load(const std::string& path);
    /// Defaults plus environment overrides, resolved against `base_dir`.
    static AppConfig from_environment(const std::string& base_dir = ".");

    void set(std::string_view key, std::string_view value, const std::string& base_dir);

    /// Fails fast: every configured file must exist and the port must be in [1, 65535].
    void validate() const;

    std::string store_path() const;
    LexiconPaths lexicon_paths() const;
    bool has_lexicons() const;
};

struct ClassifyResult {
    SentimentResult lexicon;
    std::optional<Prediction> model;

    nlohmann::json to_json() const;
};

/// The immutable language resources shared by ingestion, the API and the CLI.
class Pipeline {
public:
    Pipeline() = default;
    Pipeline(Lexicons lexicons, Gazetteer gazetteer, SourceRegistry registry, SegmenterVocab extra_vocab = {});

    static Pipeline from_config(const AppConfig& config);

    void set_models(EmbeddingModel embeddings, ClassifierModel classifier);
    void set_embeddings(EmbeddingModel embeddings);

    const Lexicons& lexicons() const { return lexicons_; }
    const Gazetteer& gazetteer() const { return gazetteer_; }
    const SourceRegistry& registry() const { return registry_; }
    const SegmenterVocab& vocab() const { return vocab_; }
    const EmbeddingModel* embeddings() const { return embeddings_ ? &*embeddings_ : nullptr; }
    const ClassifierModel* classifier() const { return classifier_ ? &*classifier_ : nullptr; }

    void set_keyword_count(std::size_t k) { keyword_count_ = k; }
    void set_abstract_sentences(std::size_t n) { abstract_sentences_ = n; }

    ClassifyResult classify(std::string_view text) const;

    /// Fills regions, keywords and abstract.
    void enrich(OpinionDocument& doc) const;
    /// Sets sentiment_score from the lexicon scorer; the label and model_probability
    /// come from the neural model when one is loaded, otherwise from the lexicon score.
    void classify(OpinionDocument& doc) const;

    std::vector<std::string> tokens(std::string_view text) const;

private:
    Lexicons lexicons_;
    Gazetteer gazetteer_;
    SourceRegistry registry_;
    SegmenterVocab vocab_;
    std::optional<EmbeddingModel> embeddings_;
    std::optional<ClassifierModel> classifier_;
    std::size_t keyword_count_ = 5;
    std::size_t abstract_sentences_ = 2;
};

struct IngestReport {
    std::size_t read = 0;
    std::size_t stored = 0;
    std::size_t rejected = 0;
    std::size_t duplicates = 0;
    std::map<std::string, std::size_t> rejected_reasons;
    std::vector<std::string> stored_ids;

    nlohmann::json to_json() const;
};

/// clean -> dedup -> enrich -> classify -> store, one JSON document per line.
/// Malformed lines are counted as rejected and skipped; blank lines are ignored.
IngestReport ingest(std::istream& lines, CorpusStore& store, const Pipeline& pipeline);
/// Throws LoadError when the file cannot be read.
IngestReport ingest_file(const std::string& path, CorpusStore& store, const Pipeline& pipeline);

/// Re-runs classification over every stored document.
std::size_t reclassify(CorpusStore& store, const Pipeline& pipeline);

using ApiParams = std::map<std::string, std::string>;

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Request handlers, independent of the HTTP transport.
class Api {
public:
    Api(CorpusStore& store, const Pipeline& pipeline, int default_page_size = 20);

    ApiResponse documents(const ApiParams& params) const;
    ApiResponse document(std::string_view id) const;
    ApiResponse trends(const ApiParams& params) const;
    ApiResponse regions(const ApiParams& params) const;
    ApiResponse media_summary(const ApiParams& params) const;
    ApiResponse classify(std::string_view body) const;
    ApiResponse ingest(std::string_view body);

    /// Builds a store filter from `q`, `from`, `to`, `media_type`, `region`, `page`, `page_size`.
    /// Throws ParameterError naming the bad field.
    QueryFilter parse_filter(const ApiParams& params) const;

private:
    CorpusStore& store_;
    const Pipeline& pipeline_;
    int default_page_size_;
};

/// Serves the Api over HTTP until stop() is called.
class HttpServer {
public:
    HttpServer(CorpusStore& store, const Pipeline& pipeline, const AppConfig& config);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to config.port (or any free port when `any_port`) and returns the port.
    int bind(bool any_port = false);
    /// Blocks serving requests.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace opinion
