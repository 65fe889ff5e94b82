// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

// Command-line front end: ingestion, training, evaluation and the HTTP service.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "opinion/analytics.hpp"
#include "opinion/error.hpp"
#include "opinion/evaluation.hpp"
#include "opinion/service.hpp"
#include "opinion/synthetic.hpp"
#include "opinion/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace opinion;

namespace {

struct Globals {
    std::string config_path;
    std::string data_dir;
    std::string vocab_path;
    std::uint64_t seed = 1;
};

AppConfig load_config(const Globals& g) {
    auto cfg = g.config_path.empty() ? AppConfig::from_environment(fs::current_path().string())
                                     : AppConfig::load(g.config_path);
    if (!g.data_dir.empty()) cfg.data_dir = fs::absolute(g.data_dir).string();
    if (!g.vocab_path.empty()) cfg.segmenter_vocab = fs::absolute(g.vocab_path).string();
    return cfg;
}

// One document per line: JSON objects with `text` (or `title`/`content`) or plain text.
std::vector<std::string> read_texts(const std::string& path) {
    std::vector<std::string> out;
    for (const auto& line : text::read_lines(path)) {
        if (text::trim(line).empty()) continue;
        const auto j = json::parse(line, nullptr, false);
        if (j.is_object()) {
            std::string t;
            if (j.contains("text")) t = j["text"].get<std::string>();
            if (j.contains("title")) t += j["title"].get<std::string>() + "\n";
            if (j.contains("content")) t += j["content"].get<std::string>();
            out.push_back(text::normalize(t));
        } else {
            out.push_back(line);
        }
    }
    return out;
}

std::vector<LabelledDoc> read_labelled(const std::string& path) {
    std::vector<LabelledDoc> out;
    const auto lines = text::read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        if (text::trim(lines[n]).empty()) continue;
        try {
            out.push_back(synthetic::labelled_from_json(json::parse(lines[n])));
        } catch (const std::exception& e) {
            throw LoadError(path + ":" + std::to_string(n + 1) + ": " + e.what());
        }
    }
    return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

HttpServer* g_server = nullptr;

void handle_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Public-opinion sentiment analytics", "opinion"};
    app.set_version_flag("--version", "0.1.0");
    Globals g;
    app.add_option("--config", g.config_path, "key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--data-dir", g.data_dir, "override the configured data directory");
    app.add_option("--vocab", g.vocab_path, "extra segmenter vocabulary, one word per line")
        ->check(CLI::ExistingFile);

    auto* ingest_cmd = app.add_subcommand("ingest", "clean, enrich, classify and store a JSONL file");
    std::string ingest_path;
    ingest_cmd->add_option("file", ingest_path)->required()->check(CLI::ExistingFile);

    auto* embed_cmd = app.add_subcommand("train-embeddings", "train skip-gram word vectors");
    std::string corpus_path, embed_out;
    EmbedTrainConfig ecfg;
    embed_cmd->add_option("corpus", corpus_path, "one document per line (text or JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    embed_cmd->add_option("-o,--out", embed_out, "output model file")->required();
    embed_cmd->add_option("--dim", ecfg.dim)->capture_default_str();
    embed_cmd->add_option("--window", ecfg.window)->capture_default_str();
    embed_cmd->add_option("--negatives", ecfg.negatives)->capture_default_str();
    embed_cmd->add_option("--epochs", ecfg.epochs)->capture_default_str();
    embed_cmd->add_option("--lr", ecfg.learning_rate)->capture_default_str();
    embed_cmd->add_option("--min-count", ecfg.min_count)->capture_default_str();
    embed_cmd->add_option("--seed", g.seed)->capture_default_str();

    auto* train_cmd = app.add_subcommand("train-classifier", "train an MLP, LSTM or SVM sentiment classifier");
    std::string labelled_path, embeddings_path, model_out, report_out, kind_name = "lstm";
    TrainConfig tcfg;
    train_cmd->add_option("labelled", labelled_path, "JSONL with `text` and `label`")
        ->required()
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--embeddings", embeddings_path)->required()->check(CLI::ExistingFile);
    train_cmd->add_option("-o,--out", model_out, "output model file")->required();
    train_cmd->add_option("--kind", kind_name)->check(CLI::IsMember({"mlp", "lstm", "svm"}))->capture_default_str();
    train_cmd->add_option("--epochs", tcfg.epochs)->capture_default_str();
    train_cmd->add_option("--lr", tcfg.learning_rate)->capture_default_str();
    train_cmd->add_option("--batch-size", tcfg.batch_size)->capture_default_str();
    train_cmd->add_option("--max-seq-len", tcfg.max_seq_len)->capture_default_str();
    train_cmd->add_option("--hidden", tcfg.lstm_hidden, "LSTM hidden size")->capture_default_str();
    train_cmd->add_option("--lambda", tcfg.svm_lambda, "SVM L2 strength")->capture_default_str();
    train_cmd->add_option("--report", report_out, "write the training report as JSON");
    train_cmd->add_option("--seed", g.seed)->capture_default_str();

    auto* eval_cmd = app.add_subcommand("evaluate", "precision, recall and F1 on a labelled JSONL file");
    std::string eval_path, eval_model, eval_embeddings;
    eval_cmd->add_option("labelled", eval_path)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--model", eval_model, "classifier model; the lexicon scorer is used without one")
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--embeddings", eval_embeddings)->check(CLI::ExistingFile);

    auto* classify_cmd = app.add_subcommand("classify", "score a text or the contents of a file");
    std::string classify_input;
    bool classify_json = false;
    classify_cmd->add_option("input", classify_input, "text, or a path to a text file")->required();
    classify_cmd->add_flag("--json", classify_json, "print the full JSON result");

    ApiParams query;
    auto add_query = [&query](CLI::App* cmd) {
        for (const char* key : {"q", "from", "to", "media_type", "region"}) {
            cmd->add_option_function<std::string>(std::string("--") + key,
                                                  [&query, key](const std::string& v) { query[key] = v; });
        }
    };
    auto* trends_cmd = app.add_subcommand("trends", "daily counts and PPR as JSON");
    add_query(trends_cmd);
    auto* regions_cmd = app.add_subcommand("regions", "per-region counts, PPR and attention as JSON");
    add_query(regions_cmd);
    auto* media_cmd = app.add_subcommand("media-summary", "per-media-type statistics as JSON");
    add_query(media_cmd);

    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP JSON API");
    int port = 0;
    serve_cmd->add_option("--port", port, "overrides the configured port");

    auto* reclassify_cmd = app.add_subcommand("reclassify", "re-run classification over the stored documents");

    app.require_subcommand(1);

    if (argc < 2) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*ingest_cmd) {
            const auto cfg = load_config(g);
            const auto pipeline = Pipeline::from_config(cfg);
            CorpusStore store(cfg.store_path());
            print_json(ingest_file(ingest_path, store, pipeline).to_json());
        } else if (*embed_cmd) {
            const auto cfg = load_config(g);
            const auto pipeline = Pipeline::from_config(cfg);
            TokenCorpus corpus;
            for (const auto& t : read_texts(corpus_path)) {
                auto tokens = pipeline.tokens(t);
                if (!tokens.empty()) corpus.push_back(std::move(tokens));
            }
            ecfg.seed = g.seed;
            const auto result = train_skipgram(corpus, ecfg);
            result.model.save(embed_out);
            print_json({{"vocab_size", result.model.size()}, {"dim", result.model.dim()}, {"epoch_loss", result.epoch_loss}});
        } else if (*train_cmd) {
            const auto cfg = load_config(g);
            const auto pipeline = Pipeline::from_config(cfg);
            const auto embeddings = EmbeddingModel::load(embeddings_path);
            const auto labelled = read_labelled(labelled_path);
            tcfg.kind = *parse_classifier_kind(kind_name);
            tcfg.seed = g.seed;
            const auto dataset = tokenize_dataset(labelled, pipeline.vocab(), pipeline.lexicons().stopwords);
            const auto result = train(dataset, embeddings, tcfg);
            result.model.save(model_out);
            std::vector<Sentiment> predicted, truth;
            for (const auto& d : dataset) {
                predicted.push_back(predict(d.tokens, result.model, embeddings, tcfg.max_seq_len).label);
                truth.push_back(d.label);
            }
            json report = {{"kind", kind_name},
                           {"epochs", tcfg.epochs},
                           {"seed", g.seed},
                           {"epoch_loss", result.epoch_loss},
                           {"train", evaluation_report(confusion(predicted, truth))}};
            if (!report_out.empty()) std::ofstream(report_out) << report.dump(2) << "\n";
            print_json(report);
        } else if (*eval_cmd) {
            const auto cfg = load_config(g);
            auto pipeline = Pipeline::from_config(cfg);
            if (!eval_model.empty()) {
                if (eval_embeddings.empty()) throw ParameterError("embeddings", "--model requires --embeddings");
                pipeline.set_models(EmbeddingModel::load(eval_embeddings), ClassifierModel::load(eval_model));
            }
            std::vector<Sentiment> predicted, truth;
            for (const auto& d : read_labelled(eval_path)) {
                const auto r = pipeline.classify(d.text);
                predicted.push_back(r.model ? r.model->label : r.lexicon.label);
                truth.push_back(d.label);
            }
            const auto counts = confusion(predicted, truth);
            const auto m = metrics(counts);
            std::printf("precision %.4f\nrecall %.4f\nf1 %.4f\n", m.precision, m.recall, m.f1);
            print_json(evaluation_report(counts));
        } else if (*classify_cmd) {
            const auto cfg = load_config(g);
            const auto pipeline = Pipeline::from_config(cfg);
            std::error_code ec;
            const auto input = fs::is_regular_file(classify_input, ec) ? text::read_file(classify_input) : classify_input;
            const auto r = pipeline.classify(input);
            if (classify_json) {
                print_json(r.to_json());
            } else {
                std::printf("score %+g\nlabel %s\n", r.lexicon.score, std::string(to_string(r.lexicon.label)).c_str());
                if (r.model) {
                    std::printf("model_probability %.6f\nmodel_label %s\n", r.model->value,
                                std::string(to_string(r.model->label)).c_str());
                }
            }
        } else if (*trends_cmd || *regions_cmd || *media_cmd) {
            const auto cfg = load_config(g);
            const auto pipeline = Pipeline::from_config(cfg);
            CorpusStore store(cfg.store_path());
            const Api api(store, pipeline, cfg.page_size);
            const auto r = *trends_cmd ? api.trends(query) : *regions_cmd ? api.regions(query) : api.media_summary(query);
            print_json(r.body);
            if (r.status != 200) return 1;
        } else if (*serve_cmd) {
            auto cfg = load_config(g);
            if (port != 0) cfg.port = port;
            cfg.validate();
            const auto pipeline = Pipeline::from_config(cfg);
            CorpusStore store(cfg.store_path());
            HttpServer server(store, pipeline, cfg);
            const int bound = server.bind();
            std::fprintf(stderr, "listening on http://%s:%d\n", cfg.bind_address.c_str(), bound);
            g_server = &server;
            std::signal(SIGINT, handle_signal);
            std::signal(SIGTERM, handle_signal);
            server.run();
            g_server = nullptr;
        } else if (*reclassify_cmd) {
            const auto cfg = load_config(g);
            const auto pipeline = Pipeline::from_config(cfg);
            CorpusStore store(cfg.store_path());
            print_json({{"reclassified", reclassify(store, pipeline)}});
        }
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.field() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
