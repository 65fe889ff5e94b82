// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include <catch_amalgamated.hpp>

#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "opinion/analytics.hpp"
#include "opinion/error.hpp"
#include "opinion/service.hpp"
#include "opinion/synthetic.hpp"
#include "opinion/text.hpp"

using namespace opinion;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = OPINION_FIXTURES_DIR;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("opinion_service_" + tag + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& contents) const {
        std::ofstream(path / name) << contents;
        return (path / name).string();
    }
};

struct ScopedEnv {
    std::string name;
    ScopedEnv(std::string n, const std::string& value) : name(std::move(n)) { ::setenv(name.c_str(), value.c_str(), 1); }
    ~ScopedEnv() { ::unsetenv(name.c_str()); }
};

const Pipeline& toy_pipeline() {
    static const Pipeline pipeline = Pipeline::from_config(AppConfig::load(kFixtures + "/toy.conf"));
    return pipeline;
}

std::string news_lines(std::size_t n, std::uint64_t seed) {
    std::string out;
    for (const auto& raw : synthetic::news_items(n, seed)) out += synthetic::to_json(raw).dump() + "\n";
    return out;
}

IngestReport ingest_text(const std::string& body, CorpusStore& store) {
    std::istringstream in(body);
    return ingest(in, store, toy_pipeline());
}

void check_conserved(const IngestReport& r) {
    CHECK(r.read == r.stored + r.rejected + r.duplicates);
    std::size_t reasons = 0;
    for (const auto& [_, n] : r.rejected_reasons) reasons += n;
    CHECK(reasons == r.rejected);
    CHECK(r.stored_ids.size() == r.stored);
}

}  // namespace

TEST_CASE("config file loading") {
    const auto cfg = AppConfig::load(kFixtures + "/toy.conf");
    CHECK(fs::path(cfg.sentiment_lexicon).is_absolute());
    CHECK(fs::equivalent(cfg.gazetteer, kFixtures + "/gazetteer.csv"));
    CHECK(fs::weakly_canonical(cfg.data_dir) == fs::weakly_canonical(fs::path(kFixtures) / ".." / "data"));
    CHECK(fs::path(cfg.store_path()).filename() == "documents.jsonl");
    CHECK(cfg.port == 8080);
    CHECK(cfg.page_size == 20);
    CHECK(cfg.has_lexicons());
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config file errors name the line") {
    TempDir dir("config");
    CHECK_THROWS_WITH(AppConfig::load(dir.file("a.conf", "port = 80\nbogus = 1\n")),
                      Catch::Matchers::ContainsSubstring("a.conf:2:"));
    CHECK_THROWS_WITH(AppConfig::load(dir.file("b.conf", "# comment\n\nport 80\n")),
                      Catch::Matchers::ContainsSubstring("b.conf:3:"));
    CHECK_THROWS_WITH(AppConfig::load(dir.file("c.conf", "port = eighty\n")),
                      Catch::Matchers::ContainsSubstring("port"));
    CHECK_THROWS_AS(AppConfig::load((dir.path / "missing.conf").string()), Error);

    const auto defaults = AppConfig::load(dir.file("d.conf", ""));
    CHECK(fs::path(defaults.data_dir) == dir.path / "data");
    CHECK_FALSE(defaults.has_lexicons());
}

TEST_CASE("config validation fails fast") {
    auto cfg = AppConfig::load(kFixtures + "/toy.conf");
    auto bad = cfg;
    bad.port = 0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad.port = 65536;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.page_size = 0;
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    bad = cfg;
    bad.gazetteer = kFixtures + "/no_such_file.csv";
    CHECK_THROWS_WITH(bad.validate(), Catch::Matchers::ContainsSubstring("gazetteer"));
    bad = cfg;
    bad.negation_lexicon.clear();
    CHECK_THROWS_AS(bad.validate(), LoadError);
    bad = cfg;
    bad.classifier_model = kFixtures + "/toy.conf";  // exists, but no embeddings configured
    CHECK_THROWS_AS(bad.validate(), LoadError);
}

TEST_CASE("environment overrides the file") {
    {
        ScopedEnv port("OPINION_PORT", "9091");
        ScopedEnv size("page_size", "50");
        const auto cfg = AppConfig::load(kFixtures + "/toy.conf");
        CHECK(cfg.port == 9091);
        CHECK(cfg.page_size == 50);
    }
    {
        ScopedEnv dir("OPINION_DATA_DIR", "/tmp/opinion-env-data");
        CHECK(AppConfig::from_environment().data_dir == "/tmp/opinion-env-data");
    }
    CHECK(AppConfig::from_environment("/srv").data_dir == "/srv/data");
}

TEST_CASE("pipeline classify trace") {
    const auto r = toy_pipeline().classify("very good。");
    CHECK(r.lexicon.score == 1.75);
    CHECK(r.lexicon.label == Sentiment::positive);
    CHECK_FALSE(r.model.has_value());
    const auto j = r.to_json();
    CHECK(j["lexicon"]["score"] == 1.75);
    CHECK(j["lexicon"]["label"] == "positive");
    CHECK(j["model"].is_null());

    CHECK(toy_pipeline().classify("not good.").lexicon.label == Sentiment::negative);
    CHECK(toy_pipeline().classify("").lexicon.score == 0.0);
}

TEST_CASE("ingest examples") {
    CorpusStore store;
    const auto body = news_lines(100, 7);
    const auto first = ingest_text(body, store);
    CHECK(first.read == 100);
    CHECK(first.stored == 100);
    CHECK(first.rejected == 0);
    check_conserved(first);

    const auto second = ingest_text(body, store);
    CHECK(second.stored == 0);
    CHECK(second.duplicates == 100);
    check_conserved(second);
    CHECK(store.snapshot()->size() == 100);
}

TEST_CASE("malformed lines are rejected and skipped") {
    auto lines = text::split(news_lines(10, 3), '\n');
    lines[4] = "{\"url\": broken";
    std::string body;
    for (const auto& l : lines) body += l + "\n";
    body += "\n   \n";  // blank lines are not records

    CorpusStore store;
    const auto r = ingest_text(body, store);
    CHECK(r.read == 10);
    CHECK(r.stored == 9);
    CHECK(r.rejected == 1);
    CHECK(r.rejected_reasons.at("malformed") == 1);
    check_conserved(r);
}

TEST_CASE("ingest conserves counts on mixed batches") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        CorpusStore store;
        const auto items = synthetic::news_items(30, 100 + static_cast<std::uint64_t>(trial));
        std::string body;
        for (std::size_t i = 0; i < items.size(); ++i) {
            auto raw = items[i];
            const auto roll = rng.below(6);
            if (roll == 0) raw.url.reset();
            if (roll == 1) raw.published_at = "yesterday";
            if (roll == 2) raw.source_name = "unknown outlet";
            body += synthetic::to_json(raw).dump() + "\n";
            if (roll == 3) body += synthetic::to_json(raw).dump() + "\n";  // in-batch duplicate
            if (roll == 4) body += "not json\n";
        }
        const auto r = ingest_text(body, store);
        check_conserved(r);
        CHECK(store.snapshot()->size() == r.stored);
        check_conserved(ingest_text(body, store));
        CHECK(store.snapshot()->size() == r.stored);
    }
}

TEST_CASE("ingested documents are enriched and classified") {
    CorpusStore store;
    ingest_text(news_lines(40, 11), store);
    const auto snap = store.snapshot();
    std::size_t with_region = 0;
    for (const auto& d : snap->select({})) {
        CHECK(d.sentiment_label.has_value());
        CHECK(d.sentiment_score.has_value());
        CHECK_FALSE(d.model_probability.has_value());
        CHECK((*d.sentiment_score > 0) == (d.sentiment_label == Sentiment::positive));
        CHECK_FALSE(d.keywords.empty());
        CHECK_FALSE(d.abstract.empty());
        CHECK(d.content.find('<') == std::string::npos);
        with_region += d.regions.primary ? 1 : 0;
    }
    // Every generated title names a place from the fixture gazetteer.
    CHECK(with_region == snap->size());

    CHECK(reclassify(store, toy_pipeline()) == snap->size());
    CHECK(store.snapshot()->select({}) == snap->select({}));
}

TEST_CASE("ingest_file errors") {
    CorpusStore store;
    CHECK_THROWS_AS(ingest_file(kFixtures + "/no_such.jsonl", store, toy_pipeline()), LoadError);
    const auto r = ingest_file(kFixtures + "/news_100.jsonl", store, toy_pipeline());
    CHECK(r.stored == 100);
}

TEST_CASE("api examples") {
    CorpusStore store;
    Api api(store, toy_pipeline());

    const auto empty = api.trends({{"from", "2020-01-01"}, {"to", "2020-01-02"}});
    CHECK(empty.status == 200);
    CHECK(empty.body == json::parse(R"([{"date":"2020-01-01","count":0,"ppr":0.5},
                                        {"date":"2020-01-02","count":0,"ppr":0.5}])"));
    CHECK(api.trends({}).body == json::array());

    const auto cls = api.classify(R"({"text": "very good。"})");
    CHECK(cls.status == 200);
    CHECK(cls.body["lexicon"]["score"] == 1.75);
    CHECK(cls.body["lexicon"]["label"] == "positive");
    CHECK(cls.body["model"].is_null());

    for (const char* body : {"", "[]", R"({"text": 3})", R"({"words": "good"})"}) {
        const auto r = api.classify(body);
        CHECK(r.status == 400);
        CHECK(r.body["field"] == "text");
    }

    const auto missing = api.document("0123456789abcdef");
    CHECK(missing.status == 404);
    CHECK(missing.body["error"] == "not_found");
}

TEST_CASE("api rejects malformed parameters with the field name") {
    CorpusStore store;
    Api api(store, toy_pipeline());
    const std::vector<std::pair<ApiParams, std::string>> cases{
        {{{"from", "last week"}}, "from"},
        {{{"to", "2020-13-40"}}, "to"},
        {{{"from", "2020-02-01"}, {"to", "2020-01-01"}}, "from"},
        {{{"media_type", "radio"}}, "media_type"},
        {{{"page", "0"}}, "page"},
        {{{"page", "two"}}, "page"},
        {{{"page_size", "100000"}}, "page_size"},
    };
    for (const auto& [params, field] : cases) {
        for (const auto& r : {api.documents(params), api.trends(params), api.regions(params),
                              api.media_summary(params)}) {
            CHECK(r.status == 400);
            CHECK(r.body["error"] == "bad_parameter");
            CHECK(r.body["field"] == field);
        }
    }
    const auto wide = api.trends({{"from", "1900-01-01"}, {"to", "2020-01-01"}});
    CHECK(wide.status == 400);
}

TEST_CASE("api results equal direct analytics") {
    CorpusStore store;
    ingest_text(news_lines(100, 7), store);
    Api api(store, toy_pipeline(), 7);

    const auto all = store.snapshot()->select({});
    const auto page = api.documents({{"page", "2"}});
    CHECK(page.body["total"] == all.size());
    CHECK(page.body["page_size"] == 7);
    REQUIRE(page.body["documents"].size() == 7);
    CHECK(page.body["documents"][0]["id"] == all[7].id);

    const auto one = api.document(all[3].id);
    CHECK(one.status == 200);
    CHECK(one.body == json(all[3]));

    const ApiParams window{{"from", "2020-01-16"}, {"to", "2020-01-20"}};
    const auto filter = api.parse_filter(window);
    const auto subset = store.snapshot()->select(filter);
    CHECK(api.trends(window).body.dump() ==
          to_json(trend_series(subset, *parse_date("2020-01-16"), *parse_date("2020-01-20"))).dump());
    CHECK(api.regions(window).body.dump() == to_json(region_stats(subset)).dump());
    CHECK(api.media_summary(window).body.dump() == to_json(media_summary(subset)).dump());

    const auto gov = api.documents({{"media_type", "government"}, {"page_size", "500"}});
    for (const auto& d : gov.body["documents"]) CHECK(d["media_type"] == "government");
    const auto hubei = api.regions({{"region", "42"}});
    for (const auto& r : hubei.body) CHECK(r["region"] == "42");
}

TEST_CASE("http round trip, concurrent readers and read-only endpoints") {
    TempDir dir("http");
    auto cfg = AppConfig::load(kFixtures + "/toy.conf");
    cfg.data_dir = dir.path.string();
    CorpusStore store(cfg.store_path());
    ingest_text(news_lines(60, 21), store);
    const auto before = store.snapshot()->select({});
    const auto file_before = text::read_file(cfg.store_path());

    HttpServer server(store, toy_pipeline(), cfg);
    const int port = server.bind(true);
    std::thread worker([&] { server.run(); });

    const std::vector<std::string> paths{"/api/documents?page_size=5",
                                         "/api/documents/" + before[0].id,
                                         "/api/trends?from=2020-01-15&to=2020-01-24",
                                         "/api/regions",
                                         "/api/media-summary?media_type=social",
                                         "/api/documents?q=%E7%89%9B%E5%A5%B6"};
    auto get = [&](const std::string& path) -> std::pair<int, std::string> {
        httplib::Client client(cfg.bind_address, port);
        for (int attempt = 0; attempt < 50; ++attempt) {
            if (auto res = client.Get(path)) return {res->status, res->body};
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
        return {0, ""};
    };

    std::vector<std::pair<int, std::string>> serial;
    for (const auto& p : paths) serial.push_back(get(p));
    for (const auto& [status, body] : serial) CHECK(status == 200);
    CHECK(json::parse(serial[1].second) == json(before[0]));

    std::vector<std::vector<std::pair<int, std::string>>> results(16);
    std::vector<std::thread> readers;
    for (std::size_t t = 0; t < results.size(); ++t) {
        readers.emplace_back([&, t] {
            for (const auto& p : paths) results[t].push_back(get(p));
        });
    }
    for (auto& r : readers) r.join();
    for (const auto& r : results) CHECK(r == serial);

    const auto unknown = get("/api/documents/nope");
    CHECK(unknown.first == 404);
    CHECK(json::parse(unknown.second)["error"] == "not_found");
    const auto no_route = get("/api/nothing");
    CHECK(no_route.first == 404);
    CHECK(json::parse(no_route.second)["error"] == "not_found");
    const auto bad = get("/api/trends?from=soon");
    CHECK(bad.first == 400);
    CHECK(json::parse(bad.second)["field"] == "from");

    httplib::Client client(cfg.bind_address, port);
    auto cls = client.Post("/api/classify", R"({"text": "very good。"})", "application/json");
    REQUIRE(cls);
    CHECK(json::parse(cls->body)["lexicon"]["score"] == 1.75);

    // None of the reads touched the store.
    CHECK(store.snapshot()->select({}) == before);
    CHECK(text::read_file(cfg.store_path()) == file_before);

    auto ing = client.Post("/api/ingest", news_lines(70, 21), "application/x-ndjson");
    REQUIRE(ing);
    CHECK(ing->status == 200);
    const auto report = json::parse(ing->body);
    CHECK(report["duplicates"] == 60);
    CHECK(report["stored"] == 10);
    CHECK(store.snapshot()->size() == 70);

    server.stop();
    worker.join();

    CorpusStore reloaded(cfg.store_path());
    CHECK(reloaded.snapshot()->size() == 70);
}
