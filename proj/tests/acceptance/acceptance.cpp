// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// usage: opinion_acceptance <opinion-cli> <fixtures-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "../support/oracles.hpp"
#include "opinion/analytics.hpp"
#include "opinion/classifiers.hpp"
#include "opinion/embeddings.hpp"
#include "opinion/enrichment.hpp"
#include "opinion/evaluation.hpp"
#include "opinion/lexicon.hpp"
#include "opinion/random.hpp"
#include "opinion/service.hpp"
#include "opinion/synthetic.hpp"
#include "opinion/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace opinion;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

void randomize(LSTMParams& p, Rng& rng, double scale) {
    for (auto& b : p.blocks()) {
        for (auto& v : b.values) v = rng.uniform(-scale, scale);
    }
}

std::vector<double> random_vector(std::size_t n, Rng& rng, double scale) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-scale, scale);
    return v;
}

// 1 ---------------------------------------------------------------------------

Outcome lstm_cell_fidelity() {
    Rng rng(2024);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const std::size_t H = 1 + rng.below(8);
        const std::size_t d = 1 + rng.below(8);
        auto p = LSTMParams::zeros(H, d);
        randomize(p, rng, 1.5);
        const auto x = random_vector(d, rng, 2.0);
        const auto h = random_vector(H, rng, 1.0);
        const auto c = random_vector(H, rng, 2.0);
        const auto [h1, c1] = lstm_cell(x, h, c, p);
        const auto [h2, c2] = oracle::lstm_cell(x, h, c, p);
        for (std::size_t k = 0; k < H; ++k) {
            worst = std::max({worst, std::abs(h1[k] - h2[k]), std::abs(c1[k] - c2[k])});
        }
    }
    const auto p = LSTMParams::zeros(1, 3);
    const std::vector<double> x{0.3, -1.2, 4.0}, h0{0.0}, c0{1.0};
    const auto [h, c] = lstm_cell(x, h0, c0, p);
    const double hand_err = std::abs(h[0] - 0.5 * std::tanh(0.5));
    const bool pass = worst < 1e-12 && hand_err < 1e-9 && std::abs(c[0] - 0.5) < 1e-12;
    return {pass, "max|diff| " + fmt("%.3g", worst) + " over 100 draws, hand case err " + fmt("%.3g", hand_err)};
}

// 2 ---------------------------------------------------------------------------

Outcome gradient_correctness() {
    double worst_lstm = 0.0, worst_mlp = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        const std::size_t H = 1 + rng.below(4);
        const std::size_t d = 1 + rng.below(4);
        const std::size_t T = 1 + rng.below(5);
        auto lstm = LSTMParams::init(H, d, rng);
        randomize(lstm, rng, 0.8);
        std::vector<std::vector<double>> storage;
        for (std::size_t t = 0; t < T; ++t) storage.push_back(random_vector(d, rng, 1.0));
        Sequence xs(storage.begin(), storage.end());
        const auto label = seed % 2 ? Sentiment::positive : Sentiment::negative;
        worst_lstm = std::max(worst_lstm, gradient_check(lstm, xs, label));

        std::vector<std::size_t> sizes{d};
        const std::size_t layers = 1 + rng.below(2);
        for (std::size_t l = 0; l < layers; ++l) sizes.push_back(1 + rng.below(4));
        sizes.push_back(1);
        auto mlp = MLPParams::init(sizes, rng);
        worst_mlp = std::max(worst_mlp, gradient_check(mlp, storage[0], label));
    }
    return {worst_lstm < 1e-4 && worst_mlp < 1e-4,
            "max relative error LSTM " + fmt("%.3g", worst_lstm) + ", MLP " + fmt("%.3g", worst_mlp) + " over 10 seeds"};
}

// 3 ---------------------------------------------------------------------------

Outcome metrics_fidelity() {
    Rng rng(77);
    double worst = 0.0;
    bool counts_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(300);
        const double bias_p = rng.uniform(), bias_t = rng.uniform();
        std::vector<bool> pp(n), tp(n);
        std::vector<Sentiment> pred(n), truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            pp[i] = rng.uniform() < bias_p;
            tp[i] = rng.uniform() < bias_t;
            pred[i] = pp[i] ? Sentiment::positive : Sentiment::negative;
            truth[i] = tp[i] ? Sentiment::positive : Sentiment::negative;
        }
        const auto c = confusion(pred, truth);
        const auto m = metrics(c);
        const auto r = oracle::recount(pp, tp);
        counts_ok = counts_ok && c.tp == r.tp && c.fp == r.fp && c.fn == r.fn && c.tn == r.tn;
        worst = std::max({worst, std::abs(m.precision - r.precision), std::abs(m.recall - r.recall),
                          std::abs(m.f1 - r.f1)});
    }
    const auto w = metrics({3, 1, 2, 0});
    const bool worked = std::abs(w.precision - 0.75) < 1e-12 && std::abs(w.recall - 0.6) < 1e-12 &&
                        std::abs(w.f1 - 0.6667) <= 1e-4;
    return {counts_ok && worst <= 1e-12 && worked,
            "max|diff| " + fmt("%.3g", worst) + " over 1000 inputs; tp=3,fp=1,fn=2 -> (" + fmt("%.4f", w.precision) +
                ", " + fmt("%.4f", w.recall) + ", " + fmt("%.4f", w.f1) + ")"};
}

// 4 ---------------------------------------------------------------------------

Lexicons fixture_lexicons(const std::string& dir) {
    return load_lexicons({dir + "/sentiment.tsv", dir + "/degree.tsv", dir + "/negation.txt", dir + "/stopwords.txt"});
}

Outcome lexicon_oracle(const std::string& fixtures) {
    Rng rng(4242);
    auto word = [&rng] {
        std::string w(3, 'a');
        for (auto& ch : w) ch = static_cast<char>('a' + rng.below(26));
        return w;
    };
    std::size_t mismatches = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        // Random disjoint toy lexicon over three-letter words; every word has the same
        // length so greedy matching splits exactly on the spaces.
        oracle::ToyLexicon toy;
        Lexicons lex;
        const auto total_words = 4 + rng.below(17);
        std::set<std::string> used;
        std::vector<std::string> pool;
        while (pool.size() < total_words) {
            auto w = word();
            if (used.insert(w).second) pool.push_back(w);
        }
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const auto& w = pool[i];
            switch (i % 4) {
                case 0: {
                    const double weight = (rng.below(2) ? 1.0 : -1.0) * (0.5 + static_cast<double>(rng.below(4)) * 0.5);
                    toy.sentiment[w] = weight;
                    lex.sentiment[w] = weight;
                    break;
                }
                case 1: {
                    const auto cat = kDegreeCategories[rng.below(5)];
                    toy.degree[w] = kDefaultDegreeMultipliers[static_cast<std::size_t>(cat)];
                    lex.degree[w] = cat;
                    break;
                }
                case 2:
                    toy.negation.insert(w);
                    lex.negation.insert(w);
                    break;
                default:
                    toy.stopwords.insert(w);
                    lex.stopwords.insert(w);
            }
        }
        // Occasionally a modifier is also listed as a stopword; it must survive.
        if (rng.below(4) == 0 && !toy.negation.empty()) {
            toy.stopwords.insert(*toy.negation.begin());
            lex.stopwords.insert(*toy.negation.begin());
        }
        SegmenterVocab vocab(lex.words());
        for (const auto& w : lex.stopwords) vocab.add(w);

        std::string text;
        double expected = 0.0;
        const auto sentences = 1 + rng.below(3);
        for (std::size_t s = 0; s < sentences; ++s) {
            std::vector<std::string> tokens;
            const auto len = rng.below(12);
            for (std::size_t k = 0; k < len; ++k) tokens.push_back(rng.below(5) == 0 ? word() : pool[rng.below(pool.size())]);
            for (std::size_t k = 0; k < tokens.size(); ++k) text += (k ? " " : "") + tokens[k];
            text += "。";
            expected += oracle::sentence_score(tokens, toy);
        }
        const auto got = score_document(text, lex, vocab);
        const double diff = std::abs(got.score - expected);
        worst = std::max(worst, diff);
        if (diff > 1e-12 || (got.label == Sentiment::positive) != (got.score > 0.0)) ++mismatches;
    }

    const auto lex = fixture_lexicons(fixtures);
    const bool hand = score_sentence({"very", "good"}, lex) == 1.75 && score_sentence({"not", "good"}, lex) == -1.0 &&
                      score_sentence({"not", "not", "good"}, lex) == 1.0 &&
                      score_sentence({"good", "very", "bad"}, lex) == -0.75;
    SegmenterVocab vocab(lex.words());
    const auto doc = score_document("very good。not bad。", lex, vocab);
    const bool composed = doc.score == 2.75 && doc.label == Sentiment::positive;
    return {mismatches == 0 && hand && composed,
            std::to_string(500 - mismatches) + "/500 match (max|diff| " + fmt("%.3g", worst) + "), hand traces " +
                (hand && composed ? "ok" : "FAILED")};
}

// 5 ---------------------------------------------------------------------------

struct Prepared {
    std::vector<TokenizedDoc> train, test;
    EmbeddingModel embeddings;
};

// Embeddings come from the training split plus any unlabelled in-domain text.
Prepared prepare(const std::vector<LabelledDoc>& docs, std::uint64_t seed, const std::vector<LabelledDoc>& unlabelled = {}) {
    const SegmenterVocab vocab(synthetic::labelled_vocab());
    const auto [train_docs, test_docs] = split_dataset(docs, 0.2, seed);
    Prepared p;
    p.train = tokenize_dataset(train_docs, vocab, {});
    p.test = tokenize_dataset(test_docs, vocab, {});
    TokenCorpus corpus;
    for (const auto& d : p.train) corpus.push_back(d.tokens);
    for (const auto& d : tokenize_dataset(unlabelled, vocab, {})) corpus.push_back(d.tokens);
    EmbedTrainConfig ecfg;
    ecfg.dim = 16;
    ecfg.seed = seed;
    p.embeddings = train_skipgram(corpus, ecfg).model;
    return p;
}

double held_out_f1(const Prepared& p, const ClassifierModel& model) {
    std::vector<Sentiment> pred, truth;
    for (const auto& d : p.test) {
        pred.push_back(predict(d.tokens, model, p.embeddings).label);
        truth.push_back(d.label);
    }
    return metrics(confusion(pred, truth)).f1;
}

TrainConfig config_for(ClassifierKind kind, std::uint64_t seed) {
    TrainConfig cfg;
    cfg.kind = kind;
    cfg.epochs = 10;
    cfg.seed = seed;
    return cfg;
}

Outcome classifier_learning() {
    std::string detail;
    bool pass = true;
    const auto sep = prepare(synthetic::separable_corpus(2000, 5), 5);
    for (auto kind : {ClassifierKind::mlp, ClassifierKind::lstm, ClassifierKind::svm}) {
        const auto model = train(sep.train, sep.embeddings, config_for(kind, 5)).model;
        const double f1 = held_out_f1(sep, model);
        pass = pass && f1 >= 0.95;
        detail += std::string(to_string(kind)) + " F1 " + fmt("%.4f", f1) + ", ";
    }
    int lstm_wins = 0;
    std::string pairs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        // In the mixed documents positive and negative words share contexts, so the
        // vectors need extra unlabelled text in which each polarity keeps to itself.
        const auto noisy = prepare(synthetic::order_sensitive_corpus(2000, 0.1, 100 + seed), seed,
                                   synthetic::separable_corpus(4000, 1000 + seed));
        const double mlp = held_out_f1(noisy, train(noisy.train, noisy.embeddings, config_for(ClassifierKind::mlp, seed)).model);
        const double lstm =
            held_out_f1(noisy, train(noisy.train, noisy.embeddings, config_for(ClassifierKind::lstm, seed)).model);
        if (lstm >= mlp) ++lstm_wins;
        pairs += (seed > 1 ? " " : "") + fmt("%.3f", lstm) + "/" + fmt("%.3f", mlp);
    }
    pass = pass && lstm_wins >= 4;
    return {pass, detail + "noisy LSTM>=MLP in " + std::to_string(lstm_wins) + "/5 (LSTM/MLP F1 " + pairs + ")"};
}

// 6 ---------------------------------------------------------------------------

Outcome embedding_property() {
    int wins = 0;
    std::string margins;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        EmbedTrainConfig cfg;
        cfg.dim = 16;
        cfg.seed = seed;
        const auto model = train_skipgram(synthetic::cooccurrence_corpus(seed), cfg).model;
        const double pq = cosine("p", "q", model), pr = cosine("p", "r", model);
        if (pq > pr) ++wins;
        margins += (seed > 1 ? " " : "") + fmt("%.3f", pq) + ">" + fmt("%.3f", pr);
    }
    return {wins == 5, std::to_string(wins) + "/5 seeds, cos(p,q)>cos(p,r): " + margins};
}

// 7 ---------------------------------------------------------------------------

Outcome ppr_sentinel() {
    bool exhaustive = true;
    for (std::size_t count = 0; count <= 10; ++count) {
        for (std::size_t pos = 0; pos <= count; ++pos) {
            std::vector<OpinionDocument> docs(count);
            for (std::size_t i = 0; i < count; ++i) {
                docs[i].sentiment_label = i < pos ? Sentiment::positive : Sentiment::negative;
            }
            exhaustive = exhaustive && ppr(pos, count) == 0.5 && ppr(docs) == 0.5;
        }
    }
    const bool ratio = ppr(13, 20) == 0.65;
    const auto timeline = synthetic::incident_timeline();
    using namespace std::chrono;
    const Date spike_day = sys_days{year{2020} / January / 23};
    const auto series = trend_series(timeline, sys_days{year{2020} / January / 15}, sys_days{year{2020} / January / 29});
    double spike = -1.0;
    for (const auto& p : series) {
        if (p.date == spike_day) spike = p.ppr;
    }
    const bool spike_ok = std::abs(spike - 34.0 / 69.0) <= 1e-12 && std::round(spike * 1e4) / 1e4 == 0.4928;
    return {exhaustive && ratio && spike_ok, std::string("counts 0..10 -> 0.5 ") + (exhaustive ? "ok" : "FAILED") +
                                                 ", 13/20 -> " + fmt("%.17g", ppr(13, 20)) + ", spike day " +
                                                 fmt("%.10f", spike)};
}

// 8 ---------------------------------------------------------------------------

Outcome textrank_pagerank() {
    Rng rng(8);
    double worst = 0.0, worst_sum = 0.0, worst_fixed = 0.0;
    std::size_t max_iter = 0;
    bool converged = true;
    for (int g = 0; g < 20; ++g) {
        const std::size_t n = 1 + rng.below(12);
        WeightedGraph graph(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (rng.uniform() < 0.35) {
                    const double w = g % 2 ? 1.0 : rng.uniform(0.1, 3.0);
                    graph[i].emplace_back(j, w);
                    graph[j].emplace_back(i, w);
                }
            }
        }
        const auto r = pagerank(graph, kDamping, kTolerance, kMaxIterations, [&](const Vector& s) {
            double total = 0.0;
            for (double v : s) total += v;
            double sum = 0.0;
            for (double v : s) sum += v / total;
            worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        });
        const auto o = oracle::power_iteration(graph, kDamping, kTolerance, kMaxIterations);
        const auto fixed = oracle::stationary(graph, kDamping);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(r.scores[i] - o.scores[i]));
            worst_fixed = std::max(worst_fixed, std::abs(r.scores[i] - fixed[i]));
            sum += r.normalized[i];
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        max_iter = std::max(max_iter, r.iterations);
        converged = converged && r.converged && r.iterations < 200 && r.iterations == o.iterations;
    }
    return {worst < 1e-8 && worst_sum < 1e-9 && converged && worst_fixed < 1e-4,
            "max|diff| vs power iteration " + fmt("%.3g", worst) + ", vs linear solve " + fmt("%.3g", worst_fixed) +
                ", max iterations " + std::to_string(max_iter) + ", |sum-1| " + fmt("%.3g", worst_sum)};
}

// 9 ---------------------------------------------------------------------------

json run_cli(const std::string& command) {
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + command);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    const int status = pclose(pipe);
    if (status != 0) throw std::runtime_error(command + " exited with " + std::to_string(status));
    return json::parse(output);
}

Outcome end_to_end(const std::string& cli, const std::string& fixtures) {
    const auto dir = fs::temp_directory_path() / ("opinion_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string base = "'" + cli + "' --config '" + fixtures + "/toy.conf' --data-dir '" + dir.string() + "' ";
    const auto first = run_cli(base + "ingest '" + fixtures + "/news_100.jsonl'");
    const auto second = run_cli(base + "ingest '" + fixtures + "/news_100.jsonl'");

    // Direct analytics over the documents as persisted by the CLI.
    std::vector<OpinionDocument> docs;
    for (const auto& line : text::read_lines((dir / "documents.jsonl").string())) {
        if (!line.empty()) docs.push_back(json::parse(line).get<OpinionDocument>());
    }
    Date lo = date_of(docs.front().published_at), hi = lo;
    for (const auto& d : docs) {
        lo = std::min(lo, date_of(d.published_at));
        hi = std::max(hi, date_of(d.published_at));
    }
    const std::string expected_trends = to_json(trend_series(docs, lo, hi)).dump();
    const std::string expected_regions = to_json(region_stats(docs)).dump();
    const std::string expected_media = to_json(media_summary(docs)).dump();

    auto cfg = AppConfig::load(fixtures + "/toy.conf");
    cfg.data_dir = dir.string();
    const auto pipeline = Pipeline::from_config(cfg);
    CorpusStore store(cfg.store_path());
    HttpServer server(store, pipeline, cfg);
    const int port = server.bind(true);
    std::thread worker([&] { server.run(); });
    httplib::Client client(cfg.bind_address, port);
    auto fetch = [&](const char* path) -> std::string {
        for (int attempt = 0; attempt < 50; ++attempt) {
            if (auto res = client.Get(path); res && res->status == 200) return json::parse(res->body).dump();
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
        return "<no response>";
    };
    const bool trends = fetch("/api/trends") == expected_trends;
    const bool regions = fetch("/api/regions") == expected_regions;
    const bool media = fetch("/api/media-summary") == expected_media;
    server.stop();
    worker.join();
    fs::remove_all(dir);

    const bool ingest_ok = first["stored"] == 100 && first["rejected"] == 0 && second["stored"] == 0 &&
                           second["duplicates"] == 100;
    return {ingest_ok && trends && regions && media,
            "stored " + first["stored"].dump() + " then " + second["stored"].dump() + "; trends " +
                (trends ? "match" : "DIFFER") + ", regions " + (regions ? "match" : "DIFFER") + ", media-summary " +
                (media ? "match" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: opinion_acceptance <opinion-cli> <fixtures-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string fixtures = argv[2];

    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "LSTM cell fidelity", 1.0, lstm_cell_fidelity},
        {2, "gradient correctness", 30.0, gradient_correctness},
        {3, "metrics fidelity", 1.0, metrics_fidelity},
        {4, "lexicon oracle equivalence", 5.0, [&] { return lexicon_oracle(fixtures); }},
        {5, "classifier learning", 180.0, classifier_learning},
        {6, "embedding co-occurrence", 60.0, embedding_property},
        {7, "PPR sentinel", 1.0, ppr_sentinel},
        {8, "TextRank PageRank", 1.0, textrank_pagerank},
        {9, "end-to-end CLI and HTTP", 10.0, [&] { return end_to_end(cli, fixtures); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.budget_seconds;
        const bool pass = out.pass && in_time;
        failures += !pass;
        std::printf("%s [%d] %s: %s; %.2fs (budget %.0fs)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), seconds, c.budget_seconds, in_time ? "" : " OVER BUDGET");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
