#include "evagan/evagan_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "evagan/loss.hpp"

namespace evagan {

void GanConfig::validate() const {
    if (feature_dim == 0) throw std::invalid_argument("config: feature_dim must be positive");
    if (latent_dim == 0) throw std::invalid_argument("config: latent_dim must be positive");
    if (batch_size < 2)
        throw std::invalid_argument("config: batch_size must be >= 2 (batchnorm minimum)");
    if (g_widths.empty() || d_widths.empty())
        throw std::invalid_argument("config: empty layer widths");
    for (auto w : g_widths)
        if (w == 0) throw std::invalid_argument("config: generator width 0");
    for (auto w : d_widths)
        if (w == 0) throw std::invalid_argument("config: discriminator width 0");
    if (epochs == 0) throw std::invalid_argument("config: epochs must be positive");
}

Matrix draw_noise(std::size_t n, std::size_t latent_dim, Rng& rng) {
    Matrix z(n, latent_dim);
    for (auto& v : z.vec()) v = rng.normal();
    return z;
}

Matrix ConditionalGenerator::forward(const Matrix& noise, const std::vector<int>& labels,
                                     Mode mode) {
    require_shape(noise, labels.size(), embedding.embed_dim(), "generator forward (noise)");
    const Matrix emb = embedding.lookup(labels);
    Matrix input(noise.rows(), noise.cols());
    for (std::size_t i = 0; i < input.size(); ++i)
        input.vec()[i] = noise.vec()[i] * emb.vec()[i];
    if (mode == Mode::train) {
        cached_noise_ = noise;
        cached_labels_ = labels;
    }
    return net.forward(input, mode);
}

void ConditionalGenerator::backward(const Matrix& upstream) {
    const Matrix din = net.backward(upstream);
    Matrix demb(din.rows(), din.cols());
    for (std::size_t i = 0; i < demb.size(); ++i)
        demb.vec()[i] = din.vec()[i] * cached_noise_.vec()[i];
    embedding.accumulate_grad(cached_labels_, demb);
}

std::vector<ParamRef> ConditionalGenerator::params() {
    auto out = embedding.params();
    for (auto& p : net.params()) out.push_back(p);
    return out;
}

void ConditionalGenerator::zero_grad() {
    embedding.zero_grad();
    net.zero_grad();
}

std::vector<Matrix> MultiHeadDiscriminator::forward(const Matrix& input, Mode mode) {
    const Matrix t = trunk.forward(input, mode);
    std::vector<Matrix> out;
    out.reserve(heads.size());
    for (auto& h : heads) out.push_back(h.forward(t, mode));
    return out;
}

Matrix MultiHeadDiscriminator::backward(const std::vector<Matrix>& head_grads) {
    if (head_grads.size() != heads.size())
        throw std::invalid_argument("discriminator backward: grad count != head count");
    Matrix dtrunk;
    bool first = true;
    for (std::size_t i = 0; i < heads.size(); ++i) {
        if (head_grads[i].empty()) continue;  // head excluded from this pass
        Matrix g = heads[i].backward(head_grads[i]);
        if (first) {
            dtrunk = std::move(g);
            first = false;
        } else {
            require_same_shape(dtrunk, g, "discriminator backward");
            for (std::size_t j = 0; j < dtrunk.size(); ++j) dtrunk.vec()[j] += g.vec()[j];
        }
    }
    if (first) throw std::invalid_argument("discriminator backward: all heads excluded");
    return trunk.backward(dtrunk);
}

std::vector<ParamRef> MultiHeadDiscriminator::params() {
    auto out = trunk.params();
    for (std::size_t i = 0; i < heads.size(); ++i) {
        for (auto& p : heads[i].params()) {
            p.name = "head" + std::to_string(i) + "." + p.name;
            out.push_back(p);
        }
    }
    return out;
}

void MultiHeadDiscriminator::zero_grad() {
    trunk.zero_grad();
    for (auto& h : heads) h.zero_grad();
}

namespace {

void build_generator(ConditionalGenerator& g, const GanConfig& cfg, std::size_t n_labels,
                     Rng& rng) {
    g.embedding = LabelEmbedding(n_labels, cfg.latent_dim);
    g.net = Network();
    std::size_t prev = cfg.latent_dim;
    for (auto w : cfg.g_widths) {
        g.net.dense(prev, w, Activation::relu).batchnorm(w);
        prev = w;
    }
    g.net.dense(prev, cfg.feature_dim, Activation::sigmoid);
    g.embedding.init(rng);
    g.net.init(rng);
}

void build_discriminator(MultiHeadDiscriminator& d, const GanConfig& cfg, std::size_t n_heads,
                         Rng& rng) {
    d.trunk = Network();
    std::size_t prev = cfg.feature_dim;
    for (auto w : cfg.d_widths) {
        d.trunk.dense(prev, w, Activation::leaky_relu).batchnorm(w);
        prev = w;
    }
    d.trunk.init(rng);
    d.heads.clear();
    for (std::size_t i = 0; i < n_heads; ++i) {
        d.heads.emplace_back(prev, 1, Activation::sigmoid);
        d.heads.back().init(rng);
    }
}

void require_finite_loss(double loss, const char* where) {
    if (!std::isfinite(loss)) throw std::runtime_error(std::string(where) + ": non-finite loss");
}

} // namespace

EvaganModel::EvaganModel(const GanConfig& config, Rng& rng) : config_(config) {
    config_.validate();
    build_generator(generator_, config_, /*n_labels=*/1, rng);
    build_discriminator(discriminator_, config_, /*n_heads=*/3, rng);
    g_opt_ = AdamState(generator_.params(), config_.optimizer);
    d_opt_ = AdamState(discriminator_.params(), config_.optimizer);
}

Matrix EvaganModel::generate(std::size_t n, Rng& rng, Mode mode) {
    if (n == 0) throw std::invalid_argument("generate: n must be >= 1");
    const Matrix z = draw_noise(n, config_.latent_dim, rng);
    const std::vector<int> labels(n, 0);  // single minority row in the table
    return generator_.forward(z, labels, mode);
}

StepLosses EvaganModel::d_train_step(const Matrix& real_majority, const Matrix& real_minority,
                                     Rng& rng) {
    if (real_majority.rows() < 2 || real_minority.rows() < 2)
        throw std::invalid_argument("d_train_step: sub-batches must have >= 2 rows (batchnorm)");
    require_shape(real_majority, real_majority.rows(), config_.feature_dim, "d_train_step");
    require_shape(real_minority, real_minority.rows(), config_.feature_dim, "d_train_step");

    // Fake minority batch matches the real minority batch size, mirroring the
    // paired real/fake expectation terms of the source objective.
    const Matrix fake = generate(real_minority.rows(), rng, Mode::infer);

    // One combined forward over [majority; minority; fake]. The trunk
    // batchnorm must see the classes mixed — normalizing per-class
    // sub-batches would centre each class individually and erase exactly the
    // between-class signal the heads are meant to learn.
    const std::size_t n_maj = real_majority.rows();
    const std::size_t n_min = real_minority.rows();
    const std::size_t n_fake = fake.rows();
    Matrix batch(n_maj + n_min + n_fake, config_.feature_dim);
    std::copy(real_majority.data(), real_majority.data() + real_majority.size(), batch.data());
    std::copy(real_minority.data(), real_minority.data() + real_minority.size(),
              batch.row(n_maj));
    std::copy(fake.data(), fake.data() + fake.size(), batch.row(n_maj + n_min));

    StepLosses losses;
    discriminator_.zero_grad();
    auto heads = discriminator_.forward(batch, Mode::train);

    auto slice = [](const Matrix& col, std::size_t from, std::size_t n) {
        Matrix out(n, 1);
        for (std::size_t i = 0; i < n; ++i) out(i, 0) = col(from + i, 0);
        return out;
    };
    auto paste = [](Matrix& dst, const Matrix& src, std::size_t from) {
        for (std::size_t i = 0; i < src.rows(); ++i) dst(from + i, 0) = src(i, 0);
    };
    // Per-slice mean losses keep the scarce minority rows from being drowned
    // out by the majority slice; the head gradients are the slice gradients
    // pasted back together, zero where a slice excludes a head.
    Matrix d_src(batch.rows(), 1), d_min(batch.rows(), 1), d_maj(batch.rows(), 1);

    {  // real majority rows: all three heads, every target 1
        auto src = bce_loss_const(slice(heads[kHeadSource], 0, n_maj), 1.0);
        auto min = bce_loss_const(slice(heads[kHeadMinority], 0, n_maj), 1.0);
        auto maj = bce_loss_const(slice(heads[kHeadMajority], 0, n_maj), 1.0);
        losses.d_loss_majority = (src.loss + min.loss + maj.loss) / 3.0;
        paste(d_src, src.grad, 0);
        paste(d_min, min.grad, 0);
        paste(d_maj, maj.grad, 0);
    }
    {  // real minority rows: source real, class heads 0
        auto src = bce_loss_const(slice(heads[kHeadSource], n_maj, n_min), 1.0);
        auto min = bce_loss_const(slice(heads[kHeadMinority], n_maj, n_min), 0.0);
        auto maj = bce_loss_const(slice(heads[kHeadMajority], n_maj, n_min), 0.0);
        losses.d_loss_real_minority = (src.loss + min.loss + maj.loss) / 3.0;
        paste(d_src, src.grad, n_maj);
        paste(d_min, min.grad, n_maj);
        paste(d_maj, maj.grad, n_maj);
    }
    {  // fake minority rows: majority head excluded (its grad rows stay zero)
        auto src = bce_loss_const(slice(heads[kHeadSource], n_maj + n_min, n_fake), 0.0);
        auto min = bce_loss_const(slice(heads[kHeadMinority], n_maj + n_min, n_fake), 0.0);
        losses.d_loss_fake_minority = (src.loss + min.loss) / 2.0;
        paste(d_src, src.grad, n_maj + n_min);
        paste(d_min, min.grad, n_maj + n_min);
    }
    discriminator_.backward({d_src, d_min, d_maj});

    require_finite_loss(losses.d_loss_majority, "d_train_step");
    require_finite_loss(losses.d_loss_real_minority, "d_train_step");
    require_finite_loss(losses.d_loss_fake_minority, "d_train_step");

    d_opt_.step(discriminator_.params());
    return losses;
}

double EvaganModel::g_train_step(std::size_t batch_size, Rng& rng) {
    if (batch_size < 2) throw std::invalid_argument("g_train_step: batch must be >= 2");
    const Matrix z = draw_noise(batch_size, config_.latent_dim, rng);
    const std::vector<int> labels(batch_size, 0);

    generator_.zero_grad();
    discriminator_.zero_grad();

    // The discriminator still normalizes with this pure-fake batch's own
    // statistics, but those statistics must not leak into its running
    // buffers: infer-mode evaluation has to reflect the mixed batches the d
    // step trains on, not the generator's output distribution.
    const Matrix fake = generator_.forward(z, labels, Mode::train);
    discriminator_.trunk.set_track_stats(false);
    auto heads = discriminator_.forward(fake, Mode::train);
    discriminator_.trunk.set_track_stats(true);

    // Flip the source target to "real"; pull the minority head toward the
    // bot polarity. The majority head never feeds back into G.
    auto src = bce_loss_const(heads[kHeadSource], 1.0);
    auto min = bce_loss_const(heads[kHeadMinority], 0.0);
    const double g_loss = src.loss + min.loss;
    require_finite_loss(g_loss, "g_train_step");

    const Matrix dfake = discriminator_.backward({src.grad, min.grad, Matrix{}});
    generator_.backward(dfake);
    g_opt_.step(generator_.params());
    return g_loss;
}

} // namespace evagan
