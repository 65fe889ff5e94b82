// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 OpinionScope Contributors

#include "opinion/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "opinion/error.hpp"
#include "opinion/text.hpp"

namespace opinion {

namespace {

void fill_uniform(std::span<double> v, double limit, Rng& rng) {
    for (auto& x : v) x = rng.uniform(-limit, limit);
}

ParamBlock block(std::string_view name, Matrix& m) { return {name, m.rows, m.cols, m.data}; }
ParamBlock block(std::string_view name, Vector& v) { return {name, 1, v.size(), v}; }
ParamBlock block(std::string_view name, double& x) { return {name, 1, 1, std::span<double>(&x, 1)}; }

std::vector<ConstParamBlock> to_const_blocks(const std::vector<ParamBlock>& blocks) {
    std::vector<ConstParamBlock> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back({b.name, b.rows, b.cols, b.values});
    return out;
}

void check_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
    if (m.rows != rows || m.cols != cols || m.data.size() != rows * cols) {
        throw DimensionError(std::string("parameter ") + name + " has the wrong shape");
    }
}

void check_size(const Vector& v, std::size_t n, const char* name) {
    if (v.size() != n) throw DimensionError(std::string("parameter ") + name + " has the wrong length");
}

}  // namespace

// ---------------------------------------------------------------------------
// LSTM

LSTMParams LSTMParams::zeros(std::size_t hidden, std::size_t input) {
    LSTMParams p;
    p.hidden = hidden;
    p.input = input;
    for (auto* m : {&p.w_xi, &p.w_xf, &p.w_xo, &p.w_xc}) *m = Matrix(hidden, input);
    for (auto* m : {&p.w_hi, &p.w_hf, &p.w_ho, &p.w_hc}) *m = Matrix(hidden, hidden);
    for (auto* v : {&p.w_ci, &p.w_cf, &p.w_co, &p.b_i, &p.b_f, &p.b_o, &p.b_c, &p.w_out}) v->assign(hidden, 0.0);
    return p;
}

LSTMParams LSTMParams::init(std::size_t hidden, std::size_t input, Rng& rng) {
    auto p = zeros(hidden, input);
    const double gate_limit = 1.0 / std::sqrt(static_cast<double>(hidden + input));
    for (auto& b : p.blocks()) {
        if (b.name.front() == 'b') continue;
        const double limit = b.name == "w_out" ? 1.0 / std::sqrt(static_cast<double>(hidden)) : gate_limit;
        fill_uniform(b.values, limit, rng);
    }
    std::fill(p.b_f.begin(), p.b_f.end(), 1.0);
    return p;
}

std::vector<ParamBlock> LSTMParams::blocks() {
    return {block("w_xi", w_xi), block("w_hi", w_hi), block("w_ci", w_ci), block("b_i", b_i),
            block("w_xf", w_xf), block("w_hf", w_hf), block("w_cf", w_cf), block("b_f", b_f),
            block("w_xo", w_xo), block("w_ho", w_ho), block("w_co", w_co), block("b_o", b_o),
            block("w_xc", w_xc), block("w_hc", w_hc), block("b_c", b_c),   block("w_out", w_out),
            block("b_out", b_out)};
}

std::vector<ConstParamBlock> LSTMParams::blocks() const { return to_const_blocks(const_cast<LSTMParams*>(this)->blocks()); }

std::size_t LSTMParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks()) n += b.values.size();
    return n;
}

void LSTMParams::check() const {
    const auto H = hidden;
    const auto d = input;
    if (H == 0 || d == 0) throw DimensionError("LSTM sizes must be positive");
    check_shape(w_xi, H, d, "w_xi");
    check_shape(w_xf, H, d, "w_xf");
    check_shape(w_xo, H, d, "w_xo");
    check_shape(w_xc, H, d, "w_xc");
    check_shape(w_hi, H, H, "w_hi");
    check_shape(w_hf, H, H, "w_hf");
    check_shape(w_ho, H, H, "w_ho");
    check_shape(w_hc, H, H, "w_hc");
    check_size(w_ci, H, "w_ci");
    check_size(w_cf, H, "w_cf");
    check_size(w_co, H, "w_co");
    check_size(b_i, H, "b_i");
    check_size(b_f, H, "b_f");
    check_size(b_o, H, "b_o");
    check_size(b_c, H, "b_c");
    check_size(w_out, H, "w_out");
}

LSTMStep lstm_step(std::span<const double> x, std::span<const double> h_prev, std::span<const double> c_prev,
                   const LSTMParams& p) {
    const std::size_t H = p.hidden;
    if (x.size() != p.input || h_prev.size() != H || c_prev.size() != H) {
        throw DimensionError("lstm_cell: input or state size does not match the parameters");
    }
    LSTMStep s;
    Vector a_i(p.b_i), a_f(p.b_f), a_o(p.b_o), a_c(p.b_c);
    gemv_add(p.w_xi, x, a_i);
    gemv_add(p.w_hi, h_prev, a_i);
    gemv_add(p.w_xf, x, a_f);
    gemv_add(p.w_hf, h_prev, a_f);
    gemv_add(p.w_xo, x, a_o);
    gemv_add(p.w_ho, h_prev, a_o);
    gemv_add(p.w_xc, x, a_c);
    gemv_add(p.w_hc, h_prev, a_c);

    s.input_gate.resize(H);
    s.forget_gate.resize(H);
    s.output_gate.resize(H);
    s.candidate.resize(H);
    s.c.resize(H);
    s.tanh_c.resize(H);
    s.h.resize(H);
    for (std::size_t k = 0; k < H; ++k) {
        s.input_gate[k] = sigmoid(a_i[k] + p.w_ci[k] * c_prev[k]);
        s.forget_gate[k] = sigmoid(a_f[k] + p.w_cf[k] * c_prev[k]);
        s.output_gate[k] = sigmoid(a_o[k] + p.w_co[k] * c_prev[k]);
        s.candidate[k] = std::tanh(a_c[k]);
        s.c[k] = s.forget_gate[k] * c_prev[k] + s.input_gate[k] * s.candidate[k];
        s.tanh_c[k] = std::tanh(s.c[k]);
        s.h[k] = s.output_gate[k] * s.tanh_c[k];
    }
    return s;
}

std::pair<Vector, Vector> lstm_cell(std::span<const double> x, std::span<const double> h_prev,
                                    std::span<const double> c_prev, const LSTMParams& p) {
    auto s = lstm_step(x, h_prev, c_prev, p);
    return {std::move(s.h), std::move(s.c)};
}

double lstm_logit(const Sequence& xs, const LSTMParams& p) {
    Vector h(p.hidden, 0.0), c(p.hidden, 0.0);
    for (const auto& x : xs) {
        auto s = lstm_step(x, h, c, p);
        h = std::move(s.h);
        c = std::move(s.c);
    }
    return dot(p.w_out, h) + p.b_out;
}

double lstm_forward(const Sequence& xs, const LSTMParams& p) { return sigmoid(lstm_logit(xs, p)); }

double lstm_loss(const Sequence& xs, double target, const LSTMParams& p, LSTMParams* grad) {
    const std::size_t H = p.hidden;
    const std::size_t T = xs.size();
    std::vector<LSTMStep> steps;
    steps.reserve(T);
    const Vector zero(H, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const auto& h_prev = t == 0 ? zero : steps[t - 1].h;
        const auto& c_prev = t == 0 ? zero : steps[t - 1].c;
        steps.push_back(lstm_step(xs[t], h_prev, c_prev, p));
    }
    const auto& h_last = T == 0 ? zero : steps.back().h;
    const double z = dot(p.w_out, h_last) + p.b_out;
    const double loss = softplus(z) - target * z;
    if (grad == nullptr) return loss;

    const double dz = sigmoid(z) - target;
    for (std::size_t k = 0; k < H; ++k) grad->w_out[k] += dz * h_last[k];
    grad->b_out += dz;

    Vector dh(H), dc(H, 0.0);
    for (std::size_t k = 0; k < H; ++k) dh[k] = dz * p.w_out[k];
    Vector da_i(H), da_f(H), da_o(H), da_c(H), dh_prev(H), dc_prev(H);

    for (std::size_t t = T; t-- > 0;) {
        const auto& s = steps[t];
        const auto& h_prev = t == 0 ? zero : steps[t - 1].h;
        const auto& c_prev = t == 0 ? zero : steps[t - 1].c;
        for (std::size_t k = 0; k < H; ++k) {
            const double i = s.input_gate[k], f = s.forget_gate[k], o = s.output_gate[k], g = s.candidate[k];
            const double d_o = dh[k] * s.tanh_c[k];
            dc[k] += dh[k] * o * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
            da_o[k] = d_o * o * (1.0 - o);
            da_i[k] = dc[k] * g * i * (1.0 - i);
            da_f[k] = dc[k] * c_prev[k] * f * (1.0 - f);
            da_c[k] = dc[k] * i * (1.0 - g * g);

            grad->w_ci[k] += da_i[k] * c_prev[k];
            grad->w_cf[k] += da_f[k] * c_prev[k];
            grad->w_co[k] += da_o[k] * c_prev[k];
            grad->b_i[k] += da_i[k];
            grad->b_f[k] += da_f[k];
            grad->b_o[k] += da_o[k];
            grad->b_c[k] += da_c[k];
            dc_prev[k] = dc[k] * f + p.w_ci[k] * da_i[k] + p.w_cf[k] * da_f[k] + p.w_co[k] * da_o[k];
        }
        outer_add(grad->w_xi, da_i, xs[t]);
        outer_add(grad->w_xf, da_f, xs[t]);
        outer_add(grad->w_xo, da_o, xs[t]);
        outer_add(grad->w_xc, da_c, xs[t]);
        outer_add(grad->w_hi, da_i, h_prev);
        outer_add(grad->w_hf, da_f, h_prev);
        outer_add(grad->w_ho, da_o, h_prev);
        outer_add(grad->w_hc, da_c, h_prev);

        std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
        gemv_t_add(p.w_hi, da_i, dh_prev);
        gemv_t_add(p.w_hf, da_f, dh_prev);
        gemv_t_add(p.w_ho, da_o, dh_prev);
        gemv_t_add(p.w_hc, da_c, dh_prev);
        dh.swap(dh_prev);
        dc.swap(dc_prev);
    }
    return loss;
}

// ---------------------------------------------------------------------------
// MLP

MLPParams MLPParams::zeros(std::vector<std::size_t> sizes) {
    if (sizes.size() < 2 || sizes.back() != 1) throw DimensionError("MLP layer sizes must be [d, ..., 1]");
    MLPParams p;
    p.sizes = std::move(sizes);
    for (std::size_t l = 0; l + 1 < p.sizes.size(); ++l) {
        if (p.sizes[l] == 0) throw DimensionError("MLP layer sizes must be positive");
        p.weights.emplace_back(p.sizes[l + 1], p.sizes[l]);
        p.biases.emplace_back(p.sizes[l + 1], 0.0);
    }
    return p;
}

MLPParams MLPParams::init(std::vector<std::size_t> sizes, Rng& rng) {
    auto p = zeros(std::move(sizes));
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        fill_uniform(p.weights[l].data, 1.0 / std::sqrt(static_cast<double>(p.sizes[l])), rng);
    }
    return p;
}

namespace {

// Names for up to 16 layers; string_views into static storage.
constexpr std::string_view kWeightNames[] = {"w0", "w1", "w2",  "w3",  "w4",  "w5",  "w6",  "w7",
                                             "w8", "w9", "w10", "w11", "w12", "w13", "w14", "w15"};
constexpr std::string_view kBiasNames[] = {"b0", "b1", "b2",  "b3",  "b4",  "b5",  "b6",  "b7",
                                           "b8", "b9", "b10", "b11", "b12", "b13", "b14", "b15"};

}  // namespace

std::vector<ParamBlock> MLPParams::blocks() {
    if (weights.size() > std::size(kWeightNames)) throw DimensionError("MLP has too many layers");
    std::vector<ParamBlock> out;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        out.push_back(block(kWeightNames[l], weights[l]));
        out.push_back(block(kBiasNames[l], biases[l]));
    }
    return out;
}

std::vector<ConstParamBlock> MLPParams::blocks() const { return to_const_blocks(const_cast<MLPParams*>(this)->blocks()); }

void MLPParams::check() const {
    if (sizes.size() < 2 || sizes.back() != 1) throw DimensionError("MLP layer sizes must be [d, ..., 1]");
    if (weights.size() + 1 != sizes.size() || biases.size() != weights.size()) {
        throw DimensionError("MLP layer count does not match its sizes");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        check_shape(weights[l], sizes[l + 1], sizes[l], "mlp weight");
        check_size(biases[l], sizes[l + 1], "mlp bias");
    }
}

namespace {

// Activations of every layer; the last entry holds the output logit.
std::vector<Vector> mlp_activations(std::span<const double> x, const MLPParams& p) {
    if (x.size() != p.sizes.front()) throw DimensionError("mlp_forward: input size does not match the parameters");
    std::vector<Vector> acts;
    acts.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        Vector z(p.biases[l]);
        gemv_add(p.weights[l], acts.back(), z);
        if (l + 1 < p.weights.size()) {
            for (auto& v : z) v = std::tanh(v);
        }
        acts.push_back(std::move(z));
    }
    return acts;
}

}  // namespace

double mlp_logit(std::span<const double> x, const MLPParams& p) { return mlp_activations(x, p).back()[0]; }

double mlp_forward(std::span<const double> x, const MLPParams& p) { return sigmoid(mlp_logit(x, p)); }

double mlp_loss(std::span<const double> x, double target, const MLPParams& p, MLPParams* grad) {
    const auto acts = mlp_activations(x, p);
    const double z = acts.back()[0];
    const double loss = softplus(z) - target * z;
    if (grad == nullptr) return loss;

    Vector delta{sigmoid(z) - target};
    for (std::size_t l = p.weights.size(); l-- > 0;) {
        outer_add(grad->weights[l], delta, acts[l]);
        for (std::size_t k = 0; k < delta.size(); ++k) grad->biases[l][k] += delta[k];
        if (l == 0) break;
        Vector prev(p.sizes[l], 0.0);
        gemv_t_add(p.weights[l], delta, prev);
        for (std::size_t k = 0; k < prev.size(); ++k) prev[k] *= 1.0 - acts[l][k] * acts[l][k];
        delta = std::move(prev);
    }
    return loss;
}

// ---------------------------------------------------------------------------
// SVM

std::vector<ParamBlock> SVMParams::blocks() { return {block("w", w), block("b", b)}; }
std::vector<ConstParamBlock> SVMParams::blocks() const { return to_const_blocks(const_cast<SVMParams*>(this)->blocks()); }

double svm_margin(std::span<const double> x, const SVMParams& p) {
    if (x.size() != p.w.size()) throw DimensionError("svm: input size does not match the parameters");
    return dot(p.w, x) + p.b;
}

// ---------------------------------------------------------------------------
// Model files

std::string_view to_string(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::mlp:
            return "mlp";
        case ClassifierKind::lstm:
            return "lstm";
        case ClassifierKind::svm:
            return "svm";
    }
    return "lstm";
}

std::optional<ClassifierKind> parse_classifier_kind(std::string_view s) {
    for (auto k : {ClassifierKind::mlp, ClassifierKind::lstm, ClassifierKind::svm}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

namespace {

std::vector<ConstParamBlock> model_blocks(const ClassifierModel& m) {
    return std::visit([](const auto& p) { return p.blocks(); }, m.params);
}

void write_block(std::ostream& out, const ConstParamBlock& b) {
    out << b.name << ' ' << b.rows << ' ' << b.cols << '\n';
    char buf[32];
    for (std::size_t r = 0; r < b.rows; ++r) {
        for (std::size_t c = 0; c < b.cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", b.values[r * b.cols + c]);
            if (c) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

class LineReader {
public:
    explicit LineReader(std::string_view text) : lines_(text::split(text, '\n')) {}

    std::string next(const char* what) {
        while (pos_ < lines_.size()) {
            auto line = text::trim(lines_[pos_++]);
            if (!line.empty()) return line;
        }
        throw LoadError(std::string("classifier model truncated: expected ") + what);
    }
    std::size_t line_no() const { return pos_; }

private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

void read_block(LineReader& in, const ParamBlock& b) {
    std::istringstream head(in.next("block header"));
    std::string name;
    std::size_t rows = 0, cols = 0;
    head >> name >> rows >> cols;
    if (name != b.name || rows != b.rows || cols != b.cols) {
        throw LoadError("classifier model line " + std::to_string(in.line_no()) + ": expected block " +
                        std::string(b.name) + " " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
    }
    for (std::size_t r = 0; r < rows; ++r) {
        std::istringstream row(in.next("block row"));
        for (std::size_t c = 0; c < cols; ++c) {
            std::string tok;
            if (!(row >> tok)) throw LoadError("classifier model line " + std::to_string(in.line_no()) + ": short row");
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size() || !std::isfinite(v)) {
                throw LoadError("classifier model line " + std::to_string(in.line_no()) + ": bad value " + tok);
            }
            b.values[r * cols + c] = v;
        }
    }
}

}  // namespace

std::string ClassifierModel::serialize() const {
    std::ostringstream out;
    std::size_t H = 0, d = 0;
    if (const auto* l = std::get_if<LSTMParams>(&params)) {
        H = l->hidden, d = l->input;
    } else if (const auto* m = std::get_if<MLPParams>(&params)) {
        H = m->sizes.size() > 2 ? m->sizes[1] : 0, d = m->sizes.front();
    } else {
        d = std::get<SVMParams>(params).w.size();
    }
    out << to_string(kind) << ' ' << H << ' ' << d << '\n' << "version 1\n";
    if (const auto* m = std::get_if<MLPParams>(&params)) {
        out << "layers";
        for (auto s : m->sizes) out << ' ' << s;
        out << '\n';
    }
    for (const auto& b : model_blocks(*this)) write_block(out, b);
    return out.str();
}

ClassifierModel ClassifierModel::deserialize(std::string_view text) {
    LineReader in(text);
    std::istringstream head(in.next("header"));
    std::string kind_name;
    std::size_t H = 0, d = 0;
    head >> kind_name >> H >> d;
    const auto kind = parse_classifier_kind(kind_name);
    if (!kind || d == 0) throw LoadError("classifier model: expected header 'kind H d'");
    if (in.next("version") != "version 1") throw LoadError("classifier model: unsupported version");

    ClassifierModel model;
    model.kind = *kind;
    switch (*kind) {
        case ClassifierKind::lstm: {
            auto p = LSTMParams::zeros(H, d);
            for (const auto& b : p.blocks()) read_block(in, b);
            model.params = std::move(p);
            break;
        }
        case ClassifierKind::mlp: {
            std::istringstream layers(in.next("layers"));
            std::string tag;
            layers >> tag;
            std::vector<std::size_t> sizes;
            for (std::size_t s; layers >> s;) sizes.push_back(s);
            if (tag != "layers" || sizes.empty() || sizes.front() != d) {
                throw LoadError("classifier model: bad layers line");
            }
            auto p = MLPParams::zeros(sizes);
            for (const auto& b : p.blocks()) read_block(in, b);
            model.params = std::move(p);
            break;
        }
        case ClassifierKind::svm: {
            SVMParams p;
            p.w.assign(d, 0.0);
            for (const auto& b : p.blocks()) read_block(in, b);
            model.params = std::move(p);
            break;
        }
    }
    return model;
}

void ClassifierModel::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write classifier model " + path);
    out << serialize();
    if (!out) throw Error("write failed on " + path);
}

ClassifierModel ClassifierModel::load(const std::string& path) { return deserialize(text::read_file(path)); }

// ---------------------------------------------------------------------------
// Training

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ParameterError("learning_rate", "learning_rate must be positive");
    if (batch_size < 1) throw ParameterError("batch_size", "batch_size must be positive");
    if (max_seq_len < 1) throw ParameterError("max_seq_len", "max_seq_len must be positive");
    if (!(svm_lambda > 0.0)) throw ParameterError("svm_lambda", "svm_lambda must be positive");
    if (lstm_hidden < 1) throw ParameterError("lstm_hidden", "lstm_hidden must be positive");
    for (auto h : mlp_hidden) {
        if (h < 1) throw ParameterError("mlp_hidden", "hidden layer sizes must be positive");
    }
}

std::vector<TokenizedDoc> tokenize_dataset(const std::vector<LabelledDoc>& docs, const SegmenterVocab& vocab,
                                           const WordSet& stopwords) {
    std::vector<TokenizedDoc> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back({content_tokens(d.text, vocab, stopwords), d.label});
    return out;
}

Sequence embed_sequence(const std::vector<std::string>& tokens, const EmbeddingModel& embeddings,
                        std::size_t max_len) {
    Sequence seq;
    for (const auto& t : tokens) {
        if (seq.size() >= max_len) break;
        if (const auto v = embeddings.vector(t)) seq.push_back(*v);
    }
    return seq;
}

ClassifierModel initial_model(std::size_t input_dim, const TrainConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    ClassifierModel model;
    model.kind = cfg.kind;
    switch (cfg.kind) {
        case ClassifierKind::lstm:
            model.params = LSTMParams::init(cfg.lstm_hidden, input_dim, rng);
            break;
        case ClassifierKind::mlp: {
            std::vector<std::size_t> sizes{input_dim};
            sizes.insert(sizes.end(), cfg.mlp_hidden.begin(), cfg.mlp_hidden.end());
            sizes.push_back(1);
            model.params = MLPParams::init(std::move(sizes), rng);
            break;
        }
        case ClassifierKind::svm: {
            SVMParams p;
            p.w.assign(input_dim, 0.0);
            model.params = std::move(p);
            break;
        }
    }
    return model;
}

namespace {

template <typename Params>
void sgd_step(Params& p, Params& g, double scale) {
    auto pb = p.blocks();
    auto gb = g.blocks();
    for (std::size_t k = 0; k < pb.size(); ++k) {
        for (std::size_t i = 0; i < pb[k].values.size(); ++i) {
            pb[k].values[i] -= scale * gb[k].values[i];
            gb[k].values[i] = 0.0;
        }
    }
}

}  // namespace

TrainResult train(const std::vector<TokenizedDoc>& dataset, const EmbeddingModel& embeddings,
                  const TrainConfig& cfg) {
    cfg.validate();
    const auto positives = std::count_if(dataset.begin(), dataset.end(),
                                         [](const TokenizedDoc& d) { return d.label == Sentiment::positive; });
    if (positives == 0 || static_cast<std::size_t>(positives) == dataset.size()) {
        throw ParameterError("dataset", "training data must contain both positive and negative documents");
    }
    if (embeddings.size() == 0) throw ParameterError("embeddings", "embedding model is empty");

    const std::size_t d = embeddings.dim();
    const std::size_t n = dataset.size();
    std::vector<double> targets(n);
    std::vector<Sequence> sequences;
    std::vector<Vector> pooled;
    for (std::size_t i = 0; i < n; ++i) {
        targets[i] = dataset[i].label == Sentiment::positive ? 1.0 : 0.0;
        if (cfg.kind == ClassifierKind::lstm) {
            sequences.push_back(embed_sequence(dataset[i].tokens, embeddings, cfg.max_seq_len));
        } else {
            pooled.push_back(embed_document(dataset[i].tokens, embeddings));
        }
    }

    TrainResult result;
    result.model = initial_model(d, cfg);
    // Shuffling uses its own stream so the initialization matches initial_model().
    Rng rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    auto* lstm = std::get_if<LSTMParams>(&result.model.params);
    auto* mlp = std::get_if<MLPParams>(&result.model.params);
    auto* svm = std::get_if<SVMParams>(&result.model.params);
    LSTMParams lstm_grad = lstm ? LSTMParams::zeros(lstm->hidden, lstm->input) : LSTMParams{};
    MLPParams mlp_grad = mlp ? MLPParams::zeros(mlp->sizes) : MLPParams{};
    SVMParams svm_grad{Vector(d, 0.0), 0.0};

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double total = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            const double scale = cfg.learning_rate / static_cast<double>(end - start);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t i = order[k];
                if (lstm) {
                    total += lstm_loss(sequences[i], targets[i], *lstm, &lstm_grad);
                } else if (mlp) {
                    total += mlp_loss(pooled[i], targets[i], *mlp, &mlp_grad);
                } else {
                    const double y = targets[i] > 0.5 ? 1.0 : -1.0;
                    const double m = y * svm_margin(pooled[i], *svm);
                    if (m < 1.0) {
                        total += 1.0 - m;
                        for (std::size_t j = 0; j < d; ++j) svm_grad.w[j] -= y * pooled[i][j];
                        svm_grad.b -= y;
                    }
                }
            }
            if (lstm) {
                sgd_step(*lstm, lstm_grad, scale);
            } else if (mlp) {
                sgd_step(*mlp, mlp_grad, scale);
            } else {
                // The regularizer gradient is per batch, not per example.
                const double batch = static_cast<double>(end - start);
                for (std::size_t j = 0; j < d; ++j) svm_grad.w[j] += batch * cfg.svm_lambda * svm->w[j];
                sgd_step(*svm, svm_grad, scale);
            }
        }
        double epoch_loss = total / static_cast<double>(n);
        if (svm) epoch_loss += 0.5 * cfg.svm_lambda * dot(svm->w, svm->w);
        if (!std::isfinite(epoch_loss)) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch + 1) +
                                  "; lower the learning rate");
        }
        result.epoch_loss.push_back(epoch_loss);
    }
    return result;
}

Prediction predict(const std::vector<std::string>& tokens, const ClassifierModel& model,
                   const EmbeddingModel& embeddings, std::size_t max_seq_len) {
    Prediction out;
    switch (model.kind) {
        case ClassifierKind::lstm:
            out.value = lstm_forward(embed_sequence(tokens, embeddings, max_seq_len), std::get<LSTMParams>(model.params));
            out.label = out.value >= 0.5 ? Sentiment::positive : Sentiment::negative;
            break;
        case ClassifierKind::mlp:
            out.value = mlp_forward(embed_document(tokens, embeddings), std::get<MLPParams>(model.params));
            out.label = out.value >= 0.5 ? Sentiment::positive : Sentiment::negative;
            break;
        case ClassifierKind::svm:
            out.value = svm_margin(embed_document(tokens, embeddings), std::get<SVMParams>(model.params));
            out.label = out.value >= 0.0 ? Sentiment::positive : Sentiment::negative;
            break;
    }
    return out;
}

Prediction predict(std::string_view text, const ClassifierModel& model, const EmbeddingModel& embeddings,
                   const SegmenterVocab& vocab, const WordSet& stopwords) {
    return predict(content_tokens(text, vocab, stopwords), model, embeddings);
}

// ---------------------------------------------------------------------------
// Gradient checking

namespace {

template <typename Params, typename LossFn>
double check_gradients(const Params& p, Params grad, LossFn loss, double h) {
    Params probe = p;
    double worst = 0.0;
    auto probe_blocks = probe.blocks();
    const auto grad_blocks = grad.blocks();
    for (std::size_t b = 0; b < probe_blocks.size(); ++b) {
        auto values = probe_blocks[b].values;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + h;
            const double up = loss(probe);
            values[i] = saved - h;
            const double down = loss(probe);
            values[i] = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double analytic = grad_blocks[b].values[i];
            const double rel = std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

}  // namespace

double gradient_check(const LSTMParams& p, const Sequence& xs, Sentiment label, double h) {
    p.check();
    const double y = label == Sentiment::positive ? 1.0 : 0.0;
    auto grad = LSTMParams::zeros(p.hidden, p.input);
    lstm_loss(xs, y, p, &grad);
    return check_gradients(p, std::move(grad), [&](const LSTMParams& q) { return lstm_loss(xs, y, q, nullptr); }, h);
}

double gradient_check(const MLPParams& p, std::span<const double> x, Sentiment label, double h) {
    p.check();
    const double y = label == Sentiment::positive ? 1.0 : 0.0;
    auto grad = MLPParams::zeros(p.sizes);
    mlp_loss(x, y, p, &grad);
    return check_gradients(p, std::move(grad), [&](const MLPParams& q) { return mlp_loss(x, y, q, nullptr); }, h);
}

}  // namespace opinion
