#pragma once

#include "dacml/errors.hpp"
#include "dacml/random.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dacml {

struct AutoencoderConfig {
    std::size_t embedding_dim = 8;
    double learning_rate = 0.05;
    /// Initial weights are uniform in [-init_scale, init_scale] / sqrt(input_dim).
    double init_scale = 0.5;

    void validate() const {
        if (embedding_dim < 1) throw ConfigError("autoencoder.embedding_dim must be >= 1");
        if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
            throw ConfigError("autoencoder.learning_rate must be >= 0");
        if (!(init_scale >= 0.0) || !std::isfinite(init_scale))
            throw ConfigError("autoencoder.init_scale must be >= 0");
    }
};

struct GateConfig {
    double re_threshold = 0.02;

    void validate() const {
        if (!(re_threshold > 0.0)) throw ConfigError("gate.re_threshold must be > 0");
    }
};

struct EncodedState {
    std::vector<double> embedding;
    /// Mean squared reconstruction error per input component.
    double reconstruction_error = 0.0;
};

/// Inclusive: RE == threshold passes.
[[nodiscard]] inline bool gate(const EncodedState &state, const GateConfig &cfg) noexcept {
    return state.reconstruction_error <= cfg.re_threshold;
}

[[nodiscard]] inline double sigmoid(double z) noexcept { return 1.0 / (1.0 + std::exp(-z)); }

/// Single-hidden-layer autoencoder, sigmoid on both layers, trained online by
/// plain SGD on 0.5 * ||decode(encode(x)) - x||^2.
///
/// Parameters live in one flat buffer laid out as
/// [W_enc (E x D) | b_enc (E) | W_dec (D x E) | b_dec (D)], row-major, so
/// gradients share the layout and can be checked coordinate by coordinate.
class Autoencoder {
public:
    /// All-zero parameters.
    Autoencoder(std::size_t input_dim, const AutoencoderConfig &cfg)
        : input_dim_(input_dim), embedding_dim_(cfg.embedding_dim), learning_rate_(cfg.learning_rate) {
        cfg.validate();
        if (input_dim_ < 1) throw ConfigError("autoencoder input dimension must be >= 1");
        params_.assign(parameter_count(), 0.0);
    }

    [[nodiscard]] static Autoencoder random(std::size_t input_dim, const AutoencoderConfig &cfg, Rng &rng) {
        Autoencoder ae(input_dim, cfg);
        const double bound = cfg.init_scale / std::sqrt(static_cast<double>(input_dim));
        for (double &p : ae.params_) p = (2.0 * uniform01(rng) - 1.0) * bound;
        return ae;
    }

    [[nodiscard]] std::size_t input_dim() const noexcept { return input_dim_; }
    [[nodiscard]] std::size_t embedding_dim() const noexcept { return embedding_dim_; }
    [[nodiscard]] double learning_rate() const noexcept { return learning_rate_; }
    void set_learning_rate(double eta) noexcept { learning_rate_ = eta; }

    [[nodiscard]] std::size_t parameter_count() const noexcept {
        return 2 * input_dim_ * embedding_dim_ + input_dim_ + embedding_dim_;
    }
    [[nodiscard]] std::span<double> parameters() noexcept { return params_; }
    [[nodiscard]] std::span<const double> parameters() const noexcept { return params_; }

    [[nodiscard]] std::vector<double> embed(std::span<const double> obs) const {
        check_input(obs);
        std::vector<double> h(embedding_dim_);
        const double *w = enc_w();
        const double *b = enc_b();
        for (std::size_t j = 0; j < embedding_dim_; ++j) {
            double z = b[j];
            const double *row = w + j * input_dim_;
            for (std::size_t k = 0; k < input_dim_; ++k) z += row[k] * obs[k];
            h[j] = sigmoid(z);
        }
        return h;
    }

    [[nodiscard]] std::vector<double> decode(std::span<const double> embedding) const {
        if (embedding.size() != embedding_dim_)
            throw ContractError("embedding has length " + std::to_string(embedding.size()) + ", expected " +
                                std::to_string(embedding_dim_));
        std::vector<double> y(input_dim_);
        const double *w = dec_w();
        const double *b = dec_b();
        for (std::size_t k = 0; k < input_dim_; ++k) {
            double z = b[k];
            const double *row = w + k * embedding_dim_;
            for (std::size_t j = 0; j < embedding_dim_; ++j) z += row[j] * embedding[j];
            y[k] = sigmoid(z);
        }
        return y;
    }

    [[nodiscard]] EncodedState encode(std::span<const double> obs) const {
        EncodedState out;
        out.embedding = embed(obs);
        const auto y = decode(out.embedding);
        double sq = 0.0;
        for (std::size_t k = 0; k < input_dim_; ++k) sq += (y[k] - obs[k]) * (y[k] - obs[k]);
        out.reconstruction_error = sq / static_cast<double>(input_dim_);
        return out;
    }

    /// Training objective 0.5 * sum of squared reconstruction residuals.
    [[nodiscard]] double loss(std::span<const double> obs) const {
        return 0.5 * encode(obs).reconstruction_error * static_cast<double>(input_dim_);
    }

    /// Backpropagated gradient of loss(obs), same layout as parameters().
    [[nodiscard]] std::vector<double> gradient(std::span<const double> obs) const {
        const auto h = embed(obs);
        const auto y = decode(h);
        std::vector<double> grad(params_.size(), 0.0);
        const std::size_t D = input_dim_;
        const std::size_t E = embedding_dim_;
        double *g_enc_w = grad.data();
        double *g_enc_b = g_enc_w + E * D;
        double *g_dec_w = g_enc_b + E;
        double *g_dec_b = g_dec_w + D * E;

        std::vector<double> back(E, 0.0);
        const double *w_dec = dec_w();
        for (std::size_t k = 0; k < D; ++k) {
            const double delta = (y[k] - obs[k]) * y[k] * (1.0 - y[k]);
            g_dec_b[k] = delta;
            for (std::size_t j = 0; j < E; ++j) {
                g_dec_w[k * E + j] = delta * h[j];
                back[j] += w_dec[k * E + j] * delta;
            }
        }
        for (std::size_t j = 0; j < E; ++j) {
            const double delta = back[j] * h[j] * (1.0 - h[j]);
            g_enc_b[j] = delta;
            for (std::size_t k = 0; k < D; ++k) g_enc_w[j * D + k] = delta * obs[k];
        }
        return grad;
    }

    /// One SGD step on `obs`. Throws NumericalError (parameters untouched) if
    /// the gradient is not finite.
    void train_step(std::span<const double> obs) {
        const auto grad = gradient(obs);
        for (double g : grad)
            if (!std::isfinite(g)) throw NumericalError("non-finite autoencoder gradient");
        if (learning_rate_ == 0.0) return;
        for (std::size_t i = 0; i < params_.size(); ++i) params_[i] -= learning_rate_ * grad[i];
    }

private:
    void check_input(std::span<const double> obs) const {
        if (obs.size() != input_dim_)
            throw ContractError("observation has length " + std::to_string(obs.size()) + ", expected " +
                                std::to_string(input_dim_));
    }

    [[nodiscard]] const double *enc_w() const noexcept { return params_.data(); }
    [[nodiscard]] const double *enc_b() const noexcept { return enc_w() + embedding_dim_ * input_dim_; }
    [[nodiscard]] const double *dec_w() const noexcept { return enc_b() + embedding_dim_; }
    [[nodiscard]] const double *dec_b() const noexcept { return dec_w() + input_dim_ * embedding_dim_; }

    std::size_t input_dim_;
    std::size_t embedding_dim_;
    double learning_rate_;
    std::vector<double> params_;
};

} // namespace dacml
