// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "opinion/error.hpp"
#include "opinion/random.hpp"
#include "opinion/text.hpp"

namespace opinion {

std::optional<std::size_t> EmbeddingVocab::find(std::string_view w) const {
    const auto it = index.find(std::string(w));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

EmbeddingVocab build_vocab(const TokenCorpus& corpus, std::size_t min_count) {
    if (corpus.empty()) throw ParameterError("corpus", "corpus is empty");
    std::map<std::string, std::uint64_t> freq;
    for (const auto& sentence : corpus) {
        for (const auto& t : sentence) ++freq[t];
    }
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (auto& [w, c] : freq) {
        if (c >= min_count) kept.emplace_back(w, c);
    }
    if (kept.empty()) {
        throw ParameterError("min_count", "vocabulary is empty after applying min_count " + std::to_string(min_count));
    }
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    EmbeddingVocab vocab;
    for (auto& [w, c] : kept) {
        vocab.index.emplace(w, vocab.words.size());
        vocab.words.push_back(w);
        vocab.counts.push_back(c);
    }
    return vocab;
}

void EmbedTrainConfig::validate() const {
    if (dim < 2) throw ParameterError("dim", "dim must be >= 2");
    if (window < 1) throw ParameterError("window", "window must be positive");
    if (negatives < 1) throw ParameterError("negatives", "negatives must be positive");
    if (!(learning_rate > 0.0)) throw ParameterError("learning_rate", "learning_rate must be positive");
    if (min_count < 1) throw ParameterError("min_count", "min_count must be positive");
}

EmbeddingModel::EmbeddingModel(std::vector<std::string> words, Matrix vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
    if (vectors_.rows != words_.size()) throw DimensionError("embedding rows do not match vocabulary size");
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
}

std::optional<std::size_t> EmbeddingModel::find(std::string_view w) const {
    const auto it = index_.find(std::string(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::span<const double>> EmbeddingModel::vector(std::string_view w) const {
    const auto i = find(w);
    if (!i) return std::nullopt;
    return vectors_.row(*i);
}

void EmbeddingModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write embedding model " + path);
    out << size() << ' ' << dim() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < size(); ++i) {
        if (words_[i].find_first_of(" \t\r\n") != std::string::npos) {
            throw Error("embedding word contains whitespace: '" + words_[i] + "'");
        }
        out << words_[i];
        for (double v : vectors_.row(i)) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write failed on " + path);
}

EmbeddingModel EmbeddingModel::load(const std::string& path) {
    const auto lines = text::read_lines(path);
    if (lines.empty()) throw LoadError(path + ": empty embedding model");
    std::istringstream header(lines[0]);
    std::size_t n = 0, d = 0;
    if (!(header >> n >> d) || d < 2) throw LoadError(path + ":1: expected header '|V| d'");
    if (lines.size() < n + 1) throw LoadError(path + ": expected " + std::to_string(n) + " vector lines");
    std::vector<std::string> words;
    Matrix vectors(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        std::istringstream row(lines[i + 1]);
        std::string word;
        row >> word;
        for (std::size_t k = 0; k < d; ++k) {
            std::string tok;
            if (!(row >> tok)) throw LoadError(path + ":" + std::to_string(i + 2) + ": too few values");
            char* end = nullptr;
            vectors(i, k) = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size() || !std::isfinite(vectors(i, k))) {
                throw LoadError(path + ":" + std::to_string(i + 2) + ": bad value '" + tok + "'");
            }
        }
        words.push_back(std::move(word));
    }
    return EmbeddingModel(std::move(words), std::move(vectors));
}

namespace {

// Cumulative unigram^0.75 distribution for negative sampling.
class NegativeSampler {
public:
    explicit NegativeSampler(const std::vector<std::uint64_t>& counts) {
        cdf_.reserve(counts.size());
        double total = 0.0;
        for (auto c : counts) {
            total += std::pow(static_cast<double>(c), 0.75);
            cdf_.push_back(total);
        }
        for (auto& v : cdf_) v /= total;
        cdf_.back() = 1.0;
    }

    std::size_t sample(Rng& rng) const {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

// Objective over every (center, context) pair with negatives drawn from a fixed seed, so
// successive epochs are scored against identical samples.
double corpus_loss(const std::vector<std::vector<std::size_t>>& sentences, const Matrix& input, const Matrix& output,
                   const NegativeSampler& sampler, const EmbedTrainConfig& cfg) {
    Rng rng(cfg.seed ^ 0xD1B54A32D192ED03ULL);
    double loss = 0.0;
    std::size_t pairs = 0;
    for (const auto& s : sentences) {
        for (std::size_t pos = 0; pos < s.size(); ++pos) {
            const auto in = input.row(s[pos]);
            const std::size_t lo = pos >= cfg.window ? pos - cfg.window : 0;
            const std::size_t hi = std::min(s.size() - 1, pos + cfg.window);
            for (std::size_t j = lo; j <= hi; ++j) {
                if (j == pos) continue;
                loss += softplus(-dot(in, output.row(s[j])));
                for (std::size_t k = 0; k < cfg.negatives; ++k) {
                    const std::size_t neg = sampler.sample(rng);
                    if (neg != s[j]) loss += softplus(dot(in, output.row(neg)));
                }
                ++pairs;
            }
        }
    }
    return pairs ? loss / static_cast<double>(pairs) : 0.0;
}

}  // namespace

EmbedTrainResult train_skipgram(const TokenCorpus& corpus, const EmbedTrainConfig& cfg) {
    cfg.validate();
    const auto vocab = build_vocab(corpus, cfg.min_count);
    const std::size_t n_words = vocab.size();
    const std::size_t d = cfg.dim;

    std::vector<std::vector<std::size_t>> sentences;
    std::size_t total_tokens = 0;
    for (const auto& s : corpus) {
        std::vector<std::size_t> ids;
        for (const auto& t : s) {
            if (const auto i = vocab.find(t)) ids.push_back(*i);
        }
        total_tokens += ids.size();
        sentences.push_back(std::move(ids));
    }

    Rng rng(cfg.seed);
    Matrix input(n_words, d);
    for (auto& v : input.data) v = rng.uniform(-0.5, 0.5) / static_cast<double>(d);
    Matrix output(n_words, d, 0.0);
    const NegativeSampler sampler(vocab.counts);

    EmbedTrainResult result;
    const double total_steps = static_cast<double>(std::max<std::size_t>(1, cfg.epochs * total_tokens));
    std::size_t step = 0;
    Vector grad_in(d);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss = 0.0;
        std::size_t pairs = 0;
        for (const auto& s : sentences) {
            for (std::size_t pos = 0; pos < s.size(); ++pos, ++step) {
                const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(step) / total_steps);
                const std::size_t center = s[pos];
                const std::size_t lo = pos >= cfg.window ? pos - cfg.window : 0;
                const std::size_t hi = std::min(s.size() - 1, pos + cfg.window);
                auto in = input.row(center);
                for (std::size_t j = lo; j <= hi; ++j) {
                    if (j == pos) continue;
                    const std::size_t target = s[j];
                    std::fill(grad_in.begin(), grad_in.end(), 0.0);

                    auto update = [&](std::size_t word, double label) {
                        auto out = output.row(word);
                        const double f = dot(in, out);
                        loss += label > 0.0 ? softplus(-f) : softplus(f);
                        const double g = (label - sigmoid(f)) * lr;
                        for (std::size_t k = 0; k < d; ++k) {
                            grad_in[k] += g * out[k];
                            out[k] += g * in[k];
                        }
                    };

                    update(target, 1.0);
                    for (std::size_t k = 0; k < cfg.negatives; ++k) {
                        const std::size_t neg = sampler.sample(rng);
                        if (neg == target) continue;
                        update(neg, 0.0);
                    }
                    for (std::size_t k = 0; k < d; ++k) in[k] += grad_in[k];
                    ++pairs;
                }
            }
        }
        if (!all_finite(input.data) || !all_finite(output.data) || !std::isfinite(loss)) {
            throw DivergenceError("embedding training diverged at epoch " + std::to_string(epoch + 1) +
                                  "; lower the learning rate");
        }
        result.online_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
        result.epoch_loss.push_back(corpus_loss(sentences, input, output, sampler, cfg));
    }

    result.model = EmbeddingModel(vocab.words, std::move(input));
    return result;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    const double na = std::sqrt(dot(a, a));
    const double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

double cosine(std::string_view a, std::string_view b, const EmbeddingModel& model) {
    const auto va = model.vector(a);
    if (!va) throw NotFoundError("word not in vocabulary: " + std::string(a));
    const auto vb = model.vector(b);
    if (!vb) throw NotFoundError("word not in vocabulary: " + std::string(b));
    return cosine(*va, *vb);
}

Vector embed_document(const std::vector<std::string>& tokens, const EmbeddingModel& model) {
    Vector out(model.dim(), 0.0);
    std::size_t n = 0;
    for (const auto& t : tokens) {
        const auto v = model.vector(t);
        if (!v) continue;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += (*v)[k];
        ++n;
    }
    if (n > 0) {
        for (auto& x : out) x /= static_cast<double>(n);
    }
    return out;
}

}  // namespace opinion
