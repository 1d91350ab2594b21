#include "evagan/acgan_model.hpp"

#include <cmath>
#include <stdexcept>

#include "evagan/loss.hpp"

namespace evagan {
namespace {

Matrix labels_as_targets(const std::vector<int>& labels) {
    Matrix t(labels.size(), 1);
    for (std::size_t i = 0; i < labels.size(); ++i) t(i, 0) = static_cast<double>(labels[i]);
    return t;
}

void require_finite_loss(double loss, const char* where) {
    if (!std::isfinite(loss)) throw std::runtime_error(std::string(where) + ": non-finite loss");
}

} // namespace

AcganModel::AcganModel(const GanConfig& config, Rng& rng) : config_(config) {
    config_.validate();
    // Same widths and activations as the EVAGAN build; the differences are the
    // two-row label table and the two-head output.
    generator_.embedding = LabelEmbedding(2, config_.latent_dim);
    generator_.net = Network();
    std::size_t prev = config_.latent_dim;
    for (auto w : config_.g_widths) {
        generator_.net.dense(prev, w, Activation::relu).batchnorm(w);
        prev = w;
    }
    generator_.net.dense(prev, config_.feature_dim, Activation::sigmoid);
    generator_.embedding.init(rng);
    generator_.net.init(rng);

    discriminator_.trunk = Network();
    prev = config_.feature_dim;
    for (auto w : config_.d_widths) {
        discriminator_.trunk.dense(prev, w, Activation::leaky_relu).batchnorm(w);
        prev = w;
    }
    discriminator_.trunk.init(rng);
    for (int i = 0; i < 2; ++i) {
        discriminator_.heads.emplace_back(prev, 1, Activation::sigmoid);
        discriminator_.heads.back().init(rng);
    }

    g_opt_ = AdamState(generator_.params(), config_.optimizer);
    d_opt_ = AdamState(discriminator_.params(), config_.optimizer);
}

std::vector<int> AcganModel::draw_labels(std::size_t n, Rng& rng) {
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.uniform_index(2));
    return labels;
}

Matrix AcganModel::generate(std::size_t n, const std::vector<int>& labels, Rng& rng,
                            Mode mode) {
    if (n == 0) throw std::invalid_argument("generate: n must be >= 1");
    if (labels.size() != n) throw std::invalid_argument("generate: label count != n");
    const Matrix z = draw_noise(n, config_.latent_dim, rng);
    return generator_.forward(z, labels, mode);
}

StepLosses AcganModel::d_train_step(const Matrix& real_batch, const std::vector<int>& real_labels,
                                    Rng& rng) {
    if (real_batch.rows() < 2)
        throw std::invalid_argument("acgan_d_step: batch must have >= 2 rows (batchnorm)");
    if (real_labels.size() != real_batch.rows())
        throw std::invalid_argument("acgan_d_step: label count != batch rows");
    require_shape(real_batch, real_batch.rows(), config_.feature_dim, "acgan_d_step");

    const std::vector<int> fake_labels = draw_labels(config_.batch_size, rng);
    const Matrix fake = generate(config_.batch_size, fake_labels, rng, Mode::infer);

    StepLosses losses;
    discriminator_.zero_grad();

    {  // real batch: source 1, class = true labels
        auto heads = discriminator_.forward(real_batch, Mode::train);
        auto src = bce_loss_const(heads[kAcganHeadSource], 1.0);
        auto cls = bce_loss(heads[kAcganHeadClass], labels_as_targets(real_labels));
        losses.d_loss_real_minority = (src.loss + cls.loss) / 2.0;
        losses.d_loss_majority = cls.loss;  // class-head loss on real data
        discriminator_.backward({src.grad, cls.grad});
    }
    {  // fake batch: source 0, class = the labels fed to G
        auto heads = discriminator_.forward(fake, Mode::train);
        auto src = bce_loss_const(heads[kAcganHeadSource], 0.0);
        auto cls = bce_loss(heads[kAcganHeadClass], labels_as_targets(fake_labels));
        losses.d_loss_fake_minority = (src.loss + cls.loss) / 2.0;
        discriminator_.backward({src.grad, cls.grad});
    }

    require_finite_loss(losses.d_loss_real_minority, "acgan_d_step");
    require_finite_loss(losses.d_loss_fake_minority, "acgan_d_step");

    d_opt_.step(discriminator_.params());
    return losses;
}

double AcganModel::g_train_step(std::size_t batch_size, Rng& rng) {
    if (batch_size < 2) throw std::invalid_argument("acgan_g_step: batch must be >= 2");
    const std::vector<int> labels = draw_labels(batch_size, rng);
    const Matrix z = draw_noise(batch_size, config_.latent_dim, rng);

    generator_.zero_grad();
    discriminator_.zero_grad();

    // Keep the pure-fake batch's statistics out of the discriminator's
    // running buffers, matching the evagan g step.
    const Matrix fake = generator_.forward(z, labels, Mode::train);
    discriminator_.trunk.set_track_stats(false);
    auto heads = discriminator_.forward(fake, Mode::train);
    discriminator_.trunk.set_track_stats(true);

    auto src = bce_loss_const(heads[kAcganHeadSource], 1.0);
    auto cls = bce_loss(heads[kAcganHeadClass], labels_as_targets(labels));
    const double g_loss = src.loss + cls.loss;
    require_finite_loss(g_loss, "acgan_g_step");

    const Matrix dfake = discriminator_.backward({src.grad, cls.grad});
    generator_.backward(dfake);
    g_opt_.step(generator_.params());
    return g_loss;
}

} // namespace evagan
