// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "opinion/analytics.hpp"
#include "opinion/enrichment.hpp"
#include "opinion/error.hpp"
#include "opinion/evaluation.hpp"
#include "opinion/service.hpp"

namespace py = pybind11;
using namespace opinion;

namespace {

// JSON crosses the boundary as text; the Python package decodes it.
using JsonReply = std::pair<int, std::string>;

JsonReply reply(const ApiResponse& r) { return {r.status, r.body.dump()}; }

struct Service {
    Service(std::shared_ptr<const Pipeline> p, const std::optional<std::string>& store_path, int page_size)
        : pipeline(std::move(p)),
          store(store_path ? std::make_unique<CorpusStore>(*store_path) : std::make_unique<CorpusStore>()),
          api(*store, *pipeline, page_size) {}

    std::shared_ptr<const Pipeline> pipeline;
    std::unique_ptr<CorpusStore> store;
    Api api;
};

Sentiment sentiment_arg(const std::string& s) {
    const auto v = parse_sentiment(s);
    if (!v) throw ParameterError("label", "labels must be 'positive' or 'negative'");
    return *v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of the opinion analytics platform";

    // Translators run newest first, so the base class goes in before its subclasses.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<LoadError>(m, "LoadError", PyExc_OSError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);

    py::class_<Pipeline, std::shared_ptr<Pipeline>>(m, "Pipeline")
        .def(py::init([](const std::string& config_path) {
                 auto cfg = AppConfig::load(config_path);
                 cfg.validate();
                 return std::make_shared<Pipeline>(Pipeline::from_config(cfg));
             }),
             py::arg("config_path"))
        .def("classify", [](const Pipeline& p, std::string_view text) { return p.classify(text).to_json().dump(); },
             py::arg("text"))
        .def("tokens", &Pipeline::tokens, py::arg("text"))
        .def("regions",
             [](const Pipeline& p, std::string_view text) {
                 const auto r = extract_regions(text, p.gazetteer());
                 std::vector<std::tuple<std::string, std::string, std::size_t>> mentions;
                 for (const auto& mention : r.mentions) mentions.emplace_back(mention.name, mention.province_code, mention.offset);
                 return std::make_pair(mentions, r.primary);
             },
             py::arg("text"))
        .def("keywords",
             [](const Pipeline& p, std::string_view text, std::size_t k) {
                 std::vector<std::pair<std::string, double>> out;
                 for (const auto& kw : textrank_keywords(text, k, kKeywordWindow, p.vocab(), p.lexicons().stopwords)) {
                     out.emplace_back(kw.word, kw.score);
                 }
                 return out;
             },
             py::arg("text"), py::arg("k") = 5)
        .def("abstract",
             [](const Pipeline& p, std::string_view text, std::size_t n) {
                 return textrank_abstract(text, n, p.vocab(), p.lexicons().stopwords);
             },
             py::arg("text"), py::arg("n") = 2);

    py::class_<Service>(m, "Service")
        .def(py::init<std::shared_ptr<const Pipeline>, std::optional<std::string>, int>(), py::arg("pipeline"),
             py::arg("store_path") = std::nullopt, py::arg("page_size") = 20)
        .def("ingest",
             [](Service& s, const std::string& body) {
                 py::gil_scoped_release release;
                 std::istringstream in(body);
                 return ingest(in, *s.store, *s.pipeline).to_json().dump();
             },
             py::arg("jsonl"))
        .def("ingest_file",
             [](Service& s, const std::string& path) {
                 py::gil_scoped_release release;
                 return ingest_file(path, *s.store, *s.pipeline).to_json().dump();
             },
             py::arg("path"))
        .def("size", [](const Service& s) { return s.store->snapshot()->size(); })
        .def("documents", [](const Service& s, const ApiParams& p) { return reply(s.api.documents(p)); },
             py::arg("params") = ApiParams{})
        .def("document", [](const Service& s, const std::string& id) { return reply(s.api.document(id)); },
             py::arg("id"))
        .def("trends", [](const Service& s, const ApiParams& p) { return reply(s.api.trends(p)); },
             py::arg("params") = ApiParams{})
        .def("regions", [](const Service& s, const ApiParams& p) { return reply(s.api.regions(p)); },
             py::arg("params") = ApiParams{})
        .def("media_summary", [](const Service& s, const ApiParams& p) { return reply(s.api.media_summary(p)); },
             py::arg("params") = ApiParams{});

    m.def("split_sentences", &split_sentences, py::arg("text"));
    m.def("ppr", py::overload_cast<std::size_t, std::size_t>(&ppr), py::arg("positives"), py::arg("count"));
    m.def(
        "box_stats",
        [](std::vector<double> values) -> std::optional<std::tuple<double, double, double, double, double>> {
            const auto b = box_stats(std::move(values));
            if (!b) return std::nullopt;
            return std::make_tuple(b->min, b->q1, b->median, b->q3, b->max);
        },
        py::arg("values"));
    m.def(
        "pagerank",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
            WeightedGraph g(n);
            for (const auto& [a, b, w] : edges) {
                if (a >= n || b >= n) throw ParameterError("edges", "edge endpoint out of range");
                g[a].emplace_back(b, w);
                g[b].emplace_back(a, w);
            }
            const auto r = pagerank(g);
            return std::make_pair(r.normalized, r.iterations);
        },
        py::arg("n"), py::arg("edges"));
    m.def(
        "evaluate",
        [](const std::vector<std::string>& predicted, const std::vector<std::string>& truth) {
            std::vector<Sentiment> p, t;
            for (const auto& s : predicted) p.push_back(sentiment_arg(s));
            for (const auto& s : truth) t.push_back(sentiment_arg(s));
            return evaluation_report(confusion(p, t)).dump();
        },
        py::arg("predicted"), py::arg("truth"));
}
