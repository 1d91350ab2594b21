#pragma once

#include <cstdint>
#include <vector>

#include "evagan/adam.hpp"
#include "evagan/data.hpp"
#include "evagan/network.hpp"
#include "evagan/rng.hpp"

namespace evagan {

// Head order on the discriminator: [0] source (real=1/fake=0),
// [1] minority estimation (bot=0/normal=1), [2] majority estimation
// (normal=1/bot=0). Matches the label convention in data.hpp.
inline constexpr int kHeadSource = 0;
inline constexpr int kHeadMinority = 1;
inline constexpr int kHeadMajority = 2;

struct GanConfig {
    std::size_t latent_dim = 32;
    std::size_t feature_dim = 0;
    std::vector<std::size_t> g_widths{32, 64, 128};
    std::vector<std::size_t> d_widths{128, 64, 32};
    std::size_t batch_size = 256;
    std::size_t epochs = 150;
    AdamConfig optimizer;

    void validate() const;  // throws std::invalid_argument
};

struct StepLosses {
    double d_loss_real_minority = 0.0;
    double d_loss_fake_minority = 0.0;
    double d_loss_majority = 0.0;
    double g_loss = 0.0;
};

// Generator with an embedded class label: input = noise (*) embed(label),
// elementwise. EVAGAN uses a single-row table (minority only), ACGAN two rows.
struct ConditionalGenerator {
    LabelEmbedding embedding{1, 1};
    Network net;

    Matrix forward(const Matrix& noise, const std::vector<int>& labels, Mode mode);
    // Backward for the last train-mode forward; routes gradients into the
    // dense stack and the embedding rows.
    void backward(const Matrix& upstream);
    std::vector<ParamRef> params();
    void zero_grad();

private:
    Matrix cached_noise_;
    std::vector<int> cached_labels_;
};

// Shared trunk + independent one-unit sigmoid heads.
struct MultiHeadDiscriminator {
    Network trunk;
    std::vector<DenseLayer> heads;

    // Head outputs, each [batch x 1].
    std::vector<Matrix> forward(const Matrix& input, Mode mode);
    // head_grads[i] empty => head i excluded from this backward pass.
    Matrix backward(const std::vector<Matrix>& head_grads);
    std::vector<ParamRef> params();
    void zero_grad();
};

class EvaganModel {
public:
    EvaganModel(const GanConfig& config, Rng& rng);

    // Samples X = G(z, c_m); tabular values land in [0,1] via the sigmoid
    // output layer.
    Matrix generate(std::size_t n, Rng& rng, Mode mode = Mode::infer);

    // One Adam update of D only; the fake minority batch generated internally
    // has the same number of rows as real_minority. Trainable G parameters
    // are untouched.
    StepLosses d_train_step(const Matrix& real_majority, const Matrix& real_minority, Rng& rng);

    // One Adam update of G only through the frozen D (targets: source->real,
    // minority head->bot; majority head excluded). Trainable D parameters are
    // untouched.
    double g_train_step(std::size_t batch_size, Rng& rng);

    const GanConfig& config() const { return config_; }
    ConditionalGenerator& generator() { return generator_; }
    MultiHeadDiscriminator& discriminator() { return discriminator_; }
    AdamState& g_optimizer() { return g_opt_; }
    AdamState& d_optimizer() { return d_opt_; }

private:
    GanConfig config_;
    ConditionalGenerator generator_;
    MultiHeadDiscriminator discriminator_;
    AdamState g_opt_;
    AdamState d_opt_;
};

// Noise matrix [n x latent], standard normal.
Matrix draw_noise(std::size_t n, std::size_t latent_dim, Rng& rng);

} // namespace evagan
