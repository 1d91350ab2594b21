#include "evagan/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "evagan/kernels.hpp"

namespace evagan {

Activation activation_from_string(const std::string& s) {
    if (s == "identity") return Activation::identity;
    if (s == "relu") return Activation::relu;
    if (s == "leaky_relu") return Activation::leaky_relu;
    if (s == "sigmoid") return Activation::sigmoid;
    if (s == "tanh") return Activation::tanh;
    throw std::invalid_argument("unknown activation: " + s);
}

std::string to_string(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::leaky_relu: return "leaky_relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
    }
    return "?";
}

void Layer::zero_grad() {
    for (auto& p : params()) p.grad->fill(0.0);
}

namespace {

void apply_activation(Activation act, Matrix& y, const Matrix& pre) {
    const auto& k = kernels::active();
    switch (act) {
        case Activation::identity:
            break;
        case Activation::relu:
            k.relu(y.data(), pre.data(), y.size());
            break;
        case Activation::leaky_relu:
            k.leaky_relu(y.data(), pre.data(), kLeakySlope, y.size());
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < y.size(); ++i)
                y.vec()[i] = 1.0 / (1.0 + std::exp(-pre.vec()[i]));
            break;
        case Activation::tanh:
            for (std::size_t i = 0; i < y.size(); ++i) y.vec()[i] = std::tanh(pre.vec()[i]);
            break;
    }
}

// dZ = dY * act'(pre)
Matrix activation_grad(Activation act, const Matrix& upstream, const Matrix& pre) {
    Matrix dz(upstream.rows(), upstream.cols());
    const auto& k = kernels::active();
    switch (act) {
        case Activation::identity:
            dz = upstream;
            break;
        case Activation::relu:
            k.leaky_relu_grad(dz.data(), upstream.data(), pre.data(), 0.0, dz.size());
            break;
        case Activation::leaky_relu:
            k.leaky_relu_grad(dz.data(), upstream.data(), pre.data(), kLeakySlope, dz.size());
            break;
        case Activation::sigmoid:
            for (std::size_t i = 0; i < dz.size(); ++i) {
                const double s = 1.0 / (1.0 + std::exp(-pre.vec()[i]));
                dz.vec()[i] = upstream.vec()[i] * s * (1.0 - s);
            }
            break;
        case Activation::tanh:
            for (std::size_t i = 0; i < dz.size(); ++i) {
                const double t = std::tanh(pre.vec()[i]);
                dz.vec()[i] = upstream.vec()[i] * (1.0 - t * t);
            }
            break;
    }
    return dz;
}

} // namespace

DenseLayer::DenseLayer(std::size_t n_in, std::size_t n_out, Activation act)
    : weights_(n_in, n_out),
      bias_(1, n_out),
      grad_w_(n_in, n_out),
      grad_b_(1, n_out),
      act_(act) {
    if (n_in == 0 || n_out == 0) throw std::invalid_argument("DenseLayer: zero width");
}

void DenseLayer::init(Rng& rng) {
    // He-style uniform fan-in scaling for the rectifier activations, Xavier
    // for the saturating ones.
    const double fan_in = static_cast<double>(weights_.rows());
    const double fan_out = static_cast<double>(weights_.cols());
    double limit;
    if (act_ == Activation::relu || act_ == Activation::leaky_relu) {
        limit = std::sqrt(6.0 / fan_in);
    } else {
        limit = std::sqrt(6.0 / (fan_in + fan_out));
    }
    for (auto& w : weights_.vec()) w = rng.uniform(-limit, limit);
    bias_.fill(0.0);
}

Matrix DenseLayer::forward(const Matrix& input, Mode mode) {
    if (input.cols() != weights_.rows()) {
        throw std::invalid_argument("dense_forward: input " + input.shape_str() +
                                    " incompatible with weights " + weights_.shape_str());
    }
    Matrix pre(input.rows(), weights_.cols());
    kernels::active().gemm_nn(pre.data(), input.data(), weights_.data(), input.rows(),
                              input.cols(), weights_.cols());
    for (std::size_t r = 0; r < pre.rows(); ++r) {
        kernels::active().add(pre.row(r), bias_.data(), pre.cols());
    }
    Matrix out = pre;
    apply_activation(act_, out, pre);
    if (mode == Mode::train) {
        cached_input_ = input;
        cached_pre_ = std::move(pre);
        have_cache_ = true;
    }
    return out;
}

Matrix DenseLayer::backward(const Matrix& upstream) {
    if (!have_cache_) throw std::logic_error("dense backward without train-mode forward");
    require_shape(upstream, cached_pre_.rows(), cached_pre_.cols(), "dense backward");
    const Matrix dz = activation_grad(act_, upstream, cached_pre_);
    // dW += X^T dZ
    kernels::active().gemm_tn_acc(grad_w_.data(), cached_input_.data(), dz.data(),
                                  weights_.rows(), cached_input_.rows(), weights_.cols());
    for (std::size_t r = 0; r < dz.rows(); ++r) {
        kernels::active().add(grad_b_.data(), dz.row(r), grad_b_.cols());
    }
    // dX = dZ W^T
    Matrix dx(cached_input_.rows(), weights_.rows());
    kernels::active().gemm_nt(dx.data(), dz.data(), weights_.data(), dz.rows(), dz.cols(),
                              weights_.rows());
    return dx;
}

std::vector<ParamRef> DenseLayer::params() {
    return {{"weights", &weights_, &grad_w_}, {"bias", &bias_, &grad_b_}};
}

BatchNormLayer::BatchNormLayer(std::size_t width, double momentum, double epsilon)
    : gamma_(1, width, 1.0),
      beta_(1, width),
      grad_gamma_(1, width),
      grad_beta_(1, width),
      running_mean_(1, width),
      running_var_(1, width, 1.0),
      momentum_(momentum),
      epsilon_(epsilon) {
    if (width == 0) throw std::invalid_argument("BatchNormLayer: zero width");
    if (momentum <= 0.0 || momentum >= 1.0)
        throw std::invalid_argument("BatchNormLayer: momentum must be in (0,1)");
}

Matrix BatchNormLayer::forward(const Matrix& input, Mode mode) {
    if (input.cols() != gamma_.cols()) {
        throw std::invalid_argument("batchnorm forward: input " + input.shape_str() +
                                    " vs width " + std::to_string(gamma_.cols()));
    }
    const std::size_t n = input.rows();
    const std::size_t w = input.cols();
    Matrix out(n, w);
    if (mode == Mode::train) {
        if (n < 2) throw std::invalid_argument("batchnorm: train-mode batch must be >= 2");
        Matrix mean(1, w), var(1, w);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < w; ++c) mean(0, c) += input(r, c);
        for (std::size_t c = 0; c < w; ++c) mean(0, c) /= static_cast<double>(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < w; ++c) {
                const double d = input(r, c) - mean(0, c);
                var(0, c) += d * d;
            }
        for (std::size_t c = 0; c < w; ++c) var(0, c) /= static_cast<double>(n);

        cached_invstd_ = Matrix(1, w);
        for (std::size_t c = 0; c < w; ++c)
            cached_invstd_(0, c) = 1.0 / std::sqrt(var(0, c) + epsilon_);
        cached_xhat_ = Matrix(n, w);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < w; ++c) {
                const double xh = (input(r, c) - mean(0, c)) * cached_invstd_(0, c);
                cached_xhat_(r, c) = xh;
                out(r, c) = gamma_(0, c) * xh + beta_(0, c);
            }
        if (track_stats_) {
            for (std::size_t c = 0; c < w; ++c) {
                running_mean_(0, c) =
                    momentum_ * running_mean_(0, c) + (1.0 - momentum_) * mean(0, c);
                running_var_(0, c) =
                    momentum_ * running_var_(0, c) + (1.0 - momentum_) * var(0, c);
            }
        }
        have_cache_ = true;
    } else {
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < w; ++c) {
                const double inv = 1.0 / std::sqrt(running_var_(0, c) + epsilon_);
                out(r, c) = gamma_(0, c) * (input(r, c) - running_mean_(0, c)) * inv + beta_(0, c);
            }
    }
    return out;
}

Matrix BatchNormLayer::backward(const Matrix& upstream) {
    if (!have_cache_) throw std::logic_error("batchnorm backward without train-mode forward");
    require_same_shape(upstream, cached_xhat_, "batchnorm backward");
    const std::size_t n = upstream.rows();
    const std::size_t w = upstream.cols();
    const double dn = static_cast<double>(n);

    Matrix sum_dy(1, w), sum_dy_xhat(1, w);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < w; ++c) {
            sum_dy(0, c) += upstream(r, c);
            sum_dy_xhat(0, c) += upstream(r, c) * cached_xhat_(r, c);
        }
    for (std::size_t c = 0; c < w; ++c) {
        grad_gamma_(0, c) += sum_dy_xhat(0, c);
        grad_beta_(0, c) += sum_dy(0, c);
    }
    Matrix dx(n, w);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < w; ++c) {
            const double term = dn * upstream(r, c) - sum_dy(0, c) -
                                cached_xhat_(r, c) * sum_dy_xhat(0, c);
            dx(r, c) = gamma_(0, c) * cached_invstd_(0, c) * term / dn;
        }
    return dx;
}

std::vector<ParamRef> BatchNormLayer::params() {
    return {{"gamma", &gamma_, &grad_gamma_}, {"beta", &beta_, &grad_beta_}};
}

std::vector<ParamRef> BatchNormLayer::buffers() {
    return {{"running_mean", &running_mean_, nullptr}, {"running_var", &running_var_, nullptr}};
}

LabelEmbedding::LabelEmbedding(std::size_t n_labels, std::size_t embed_dim)
    : table_(n_labels, embed_dim), grad_(n_labels, embed_dim) {
    if (n_labels == 0 || embed_dim == 0) throw std::invalid_argument("LabelEmbedding: zero size");
}

void LabelEmbedding::init(Rng& rng) {
    // Small normal init, as customary for embedding tables.
    for (auto& v : table_.vec()) v = 0.05 * rng.normal();
}

Matrix LabelEmbedding::lookup(const std::vector<int>& labels) const {
    Matrix out(labels.size(), table_.cols());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int l = labels[i];
        if (l < 0 || static_cast<std::size_t>(l) >= table_.rows())
            throw std::invalid_argument("LabelEmbedding: label " + std::to_string(l) +
                                        " out of range");
        for (std::size_t c = 0; c < table_.cols(); ++c)
            out(i, c) = table_(static_cast<std::size_t>(l), c);
    }
    return out;
}

void LabelEmbedding::accumulate_grad(const std::vector<int>& labels, const Matrix& upstream) {
    require_shape(upstream, labels.size(), table_.cols(), "LabelEmbedding grad");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto l = static_cast<std::size_t>(labels[i]);
        for (std::size_t c = 0; c < table_.cols(); ++c) grad_(l, c) += upstream(i, c);
    }
}

std::vector<ParamRef> LabelEmbedding::params() {
    return {{"embedding", &table_, &grad_}};
}

void LabelEmbedding::zero_grad() { grad_.fill(0.0); }

} // namespace evagan
