#pragma once

#include <memory>
#include <string>
#include <vector>

#include "evagan/matrix.hpp"
#include "evagan/rng.hpp"

namespace evagan {

enum class Activation { identity, relu, leaky_relu, sigmoid, tanh };

Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

// Conventional GAN slope for LeakyReLU.
inline constexpr double kLeakySlope = 0.2;

enum class Mode { train, infer };

// A trainable tensor and its gradient accumulator, exposed by name so the
// optimizer and checkpoint code can walk a flat registry.
struct ParamRef {
    std::string name;
    Matrix* value;
    Matrix* grad;
};

class Layer {
public:
    virtual ~Layer() = default;

    virtual Matrix forward(const Matrix& input, Mode mode) = 0;
    // Consumes the gradient w.r.t. this layer's output, accumulates parameter
    // gradients, returns the gradient w.r.t. the input. Requires a preceding
    // train-mode forward.
    virtual Matrix backward(const Matrix& upstream) = 0;

    virtual std::vector<ParamRef> params() = 0;
    virtual void zero_grad();

    virtual std::size_t input_width() const = 0;
    virtual std::size_t output_width() const = 0;

    // Non-trainable buffers (batchnorm running stats) that checkpoints must
    // carry. Default: none.
    virtual std::vector<ParamRef> buffers() { return {}; }

    // Whether train-mode forwards fold batch statistics into any running
    // buffers. No-op for layers without such buffers.
    virtual void set_track_stats(bool) {}

    virtual const char* kind() const = 0;
};

class DenseLayer : public Layer {
public:
    DenseLayer(std::size_t n_in, std::size_t n_out, Activation act);

    Matrix forward(const Matrix& input, Mode mode) override;
    Matrix backward(const Matrix& upstream) override;
    std::vector<ParamRef> params() override;
    std::size_t input_width() const override { return weights_.rows(); }
    std::size_t output_width() const override { return weights_.cols(); }
    const char* kind() const override { return "dense"; }

    void init(Rng& rng);

    Matrix& weights() { return weights_; }
    Matrix& bias() { return bias_; }
    Activation activation() const { return act_; }

private:
    Matrix weights_;  // [n_in x n_out]
    Matrix bias_;     // [1 x n_out]
    Matrix grad_w_;
    Matrix grad_b_;
    Activation act_;

    Matrix cached_input_;
    Matrix cached_pre_;  // pre-activation, kept for the derivative
    bool have_cache_ = false;
};

class BatchNormLayer : public Layer {
public:
    explicit BatchNormLayer(std::size_t width, double momentum = 0.99, double epsilon = 1e-5);

    Matrix forward(const Matrix& input, Mode mode) override;
    Matrix backward(const Matrix& upstream) override;
    std::vector<ParamRef> params() override;
    std::vector<ParamRef> buffers() override;
    std::size_t input_width() const override { return gamma_.cols(); }
    std::size_t output_width() const override { return gamma_.cols(); }
    const char* kind() const override { return "batchnorm"; }

    void set_track_stats(bool on) override { track_stats_ = on; }

    double momentum() const { return momentum_; }
    double epsilon() const { return epsilon_; }
    const Matrix& running_mean() const { return running_mean_; }
    const Matrix& running_var() const { return running_var_; }

private:
    Matrix gamma_;         // [1 x w]
    Matrix beta_;          // [1 x w]
    Matrix grad_gamma_;
    Matrix grad_beta_;
    Matrix running_mean_;  // [1 x w]
    Matrix running_var_;   // [1 x w]
    double momentum_;
    double epsilon_;
    bool track_stats_ = true;

    Matrix cached_xhat_;
    Matrix cached_invstd_;  // [1 x w]
    bool have_cache_ = false;
};

// Lookup table mapping integer labels to embedding rows. Gradients flow only
// to the rows that were looked up.
class LabelEmbedding {
public:
    LabelEmbedding(std::size_t n_labels, std::size_t embed_dim);

    void init(Rng& rng);

    // Returns [batch x embed_dim]; row i is table row labels[i].
    Matrix lookup(const std::vector<int>& labels) const;
    // Accumulates d(output)/d(table) for the labels of the last combine call.
    void accumulate_grad(const std::vector<int>& labels, const Matrix& upstream);

    std::vector<ParamRef> params();
    void zero_grad();

    std::size_t n_labels() const { return table_.rows(); }
    std::size_t embed_dim() const { return table_.cols(); }
    Matrix& table() { return table_; }

private:
    Matrix table_;  // [n_labels x embed_dim]
    Matrix grad_;
};

} // namespace evagan
