// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "opinion/document.hpp"
#include "opinion/embeddings.hpp"
#include "opinion/linalg.hpp"
#include "opinion/random.hpp"
#include "opinion/segmenter.hpp"

namespace opinion {

/// A named, contiguous view of one parameter tensor.
struct ParamBlock {
    std::string_view name;
    std::size_t rows;
    std::size_t cols;
    std::span<double> values;
};

struct ConstParamBlock {
    std::string_view name;
    std::size_t rows;
    std::size_t cols;
    std::span<const double> values;
};

/// Peephole LSTM with a logistic readout on the final hidden state.
///
/// Gate weights on the input are hidden x input, on the recurrent state hidden x hidden.
/// Peephole weights are diagonal and stored as vectors. All three gates peek at the
/// previous cell state.
struct LSTMParams {
    std::size_t hidden = 0;
    std::size_t input = 0;

    Matrix w_xi, w_hi;
    Vector w_ci, b_i;
    Matrix w_xf, w_hf;
    Vector w_cf, b_f;
    Matrix w_xo, w_ho;
    Vector w_co, b_o;
    Matrix w_xc, w_hc;
    Vector b_c;
    Vector w_out;
    double b_out = 0.0;

    static LSTMParams zeros(std::size_t hidden, std::size_t input);
    /// Uniform in +-1/sqrt(fan_in) with the forget-gate bias set to 1.
    static LSTMParams init(std::size_t hidden, std::size_t input, Rng& rng);

    std::vector<ParamBlock> blocks();
    std::vector<ConstParamBlock> blocks() const;
    std::size_t parameter_count() const;

    /// Throws DimensionError on inconsistent shapes.
    void check() const;

    bool operator==(const LSTMParams&) const = default;
};

/// Everything one LSTM step computes.
struct LSTMStep {
    Vector input_gate, forget_gate, output_gate, candidate;
    Vector c, tanh_c, h;
};

LSTMStep lstm_step(std::span<const double> x, std::span<const double> h_prev, std::span<const double> c_prev,
                   const LSTMParams& p);

/// One cell update; returns (h_t, c_t). Throws DimensionError on mismatched sizes.
std::pair<Vector, Vector> lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                                    std::span<const double> c_prev, const LSTMParams& p);

using Sequence = std::vector<std::span<const double>>;

/// Logit of the positive class after running the whole sequence from a zero state.
double lstm_logit(const Sequence& xs, const LSTMParams& p);
double lstm_forward(const Sequence& xs, const LSTMParams& p);

/// Feed-forward net: tanh hidden layers, one sigmoid output unit.
struct MLPParams {
    std::vector<std::size_t> sizes;  // [d, h1, ..., 1]
    std::vector<Matrix> weights;     // weights[l] is sizes[l+1] x sizes[l]
    std::vector<Vector> biases;

    static MLPParams zeros(std::vector<std::size_t> sizes);
    static MLPParams init(std::vector<std::size_t> sizes, Rng& rng);

    std::vector<ParamBlock> blocks();
    std::vector<ConstParamBlock> blocks() const;
    void check() const;

    bool operator==(const MLPParams&) const = default;
};

double mlp_logit(std::span<const double> x, const MLPParams& p);
double mlp_forward(std::span<const double> x, const MLPParams& p);

/// Linear max-margin classifier on mean-pooled embeddings.
struct SVMParams {
    Vector w;
    double b = 0.0;

    std::vector<ParamBlock> blocks();
    std::vector<ConstParamBlock> blocks() const;

    bool operator==(const SVMParams&) const = default;
};

double svm_margin(std::span<const double> x, const SVMParams& p);

enum class ClassifierKind { mlp, lstm, svm };

std::string_view to_string(ClassifierKind k);
std::optional<ClassifierKind> parse_classifier_kind(std::string_view s);

struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::lstm;
    std::variant<MLPParams, LSTMParams, SVMParams> params;

    /// Text format: header `kind H d`, a `version 1` line, then one block per
    /// parameter: `name rows cols` followed by `rows` lines of decimal values.
    void save(const std::string& path) const;
    static ClassifierModel load(const std::string& path);
    std::string serialize() const;
    static ClassifierModel deserialize(std::string_view text);

    bool operator==(const ClassifierModel&) const = default;
};

struct TrainConfig {
    ClassifierKind kind = ClassifierKind::lstm;
    std::size_t epochs = 10;
    double learning_rate = 0.5;
    std::size_t batch_size = 32;
    std::size_t max_seq_len = 200;
    std::uint64_t seed = 1;
    double svm_lambda = 1e-4;
    std::size_t lstm_hidden = 16;
    std::vector<std::size_t> mlp_hidden = {32};

    void validate() const;
};

struct TokenizedDoc {
    std::vector<std::string> tokens;
    Sentiment label = Sentiment::negative;
};

struct LabelledDoc {
    std::string text;
    Sentiment label = Sentiment::negative;
};

std::vector<TokenizedDoc> tokenize_dataset(const std::vector<LabelledDoc>& docs, const SegmenterVocab& vocab,
                                           const WordSet& stopwords);

/// In-vocabulary embedding rows of `tokens`, at most `max_len` of them.
Sequence embed_sequence(const std::vector<std::string>& tokens, const EmbeddingModel& embeddings,
                        std::size_t max_len);

struct TrainResult {
    ClassifierModel model;
    std::vector<double> epoch_loss;
};

/// Untrained model exactly as training would start from it.
ClassifierModel initial_model(std::size_t input_dim, const TrainConfig& cfg);

/// Mini-batch SGD on binary cross-entropy (MLP, LSTM) or L2-regularized hinge loss (SVM).
/// Throws ParameterError for a single-class dataset and DivergenceError on a non-finite loss.
TrainResult train(const std::vector<TokenizedDoc>& dataset, const EmbeddingModel& embeddings,
                  const TrainConfig& cfg);

struct Prediction {
    Sentiment label = Sentiment::negative;
    /// Probability of the positive class, or the signed margin for the SVM.
    double value = 0.0;
};

/// Positive when probability >= 0.5 or margin >= 0.
Prediction predict(const std::vector<std::string>& tokens, const ClassifierModel& model,
                   const EmbeddingModel& embeddings, std::size_t max_seq_len = 200);
Prediction predict(std::string_view text, const ClassifierModel& model, const EmbeddingModel& embeddings,
                   const SegmenterVocab& vocab, const WordSet& stopwords);

/// Binary cross-entropy of one example, accumulating parameter gradients into `grad`
/// (which must have the shape of `p`; pass nullptr to skip the backward pass).
double lstm_loss(const Sequence& xs, double target, const LSTMParams& p, LSTMParams* grad);
double mlp_loss(std::span<const double> x, double target, const MLPParams& p, MLPParams* grad);

/// Largest relative error |a - n| / max(1e-8, |a| + |n|) between the analytic gradient and
/// central differences with step `h`, over every parameter.
double gradient_check(const LSTMParams& p, const Sequence& xs, Sentiment label, double h = 1e-5);
double gradient_check(const MLPParams& p, std::span<const double> x, Sentiment label, double h = 1e-5);

}  // namespace opinion
