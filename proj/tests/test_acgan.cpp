#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "evagan/acgan_model.hpp"
#include "evagan/kernels.hpp"
#include "evagan/metrics.hpp"
#include "evagan/trainer.hpp"

using namespace evagan;

namespace {

GanConfig small_config() {
    GanConfig cfg;
    cfg.feature_dim = 6;
    cfg.latent_dim = 8;
    cfg.g_widths = {8, 16};
    cfg.d_widths = {16, 8};
    cfg.batch_size = 32;
    return cfg;
}

} // namespace

TEST_CASE("acgan has two heads and a two-row label table") {
    Rng rng(1);
    AcganModel model(small_config(), rng);
    CHECK(model.discriminator().heads.size() == 2);
    CHECK(model.generator().embedding.n_labels() == 2);

    Rng noise(2);
    const Matrix x = model.generate(6, {0, 1, 0, 1, 0, 1}, noise);
    CHECK(x.rows() == 6);
    CHECK(x.cols() == 6);
    CHECK_THROWS_AS(model.generate(3, {0, 1}, noise), std::invalid_argument);
}

TEST_CASE("drawn labels cover both classes") {
    Rng rng(3);
    AcganModel model(small_config(), rng);
    const auto labels = model.draw_labels(200, rng);
    int zeros = 0, ones = 0;
    for (int l : labels) (l == 0 ? zeros : ones)++;
    CHECK(zeros > 50);
    CHECK(ones > 50);
}

TEST_CASE("cold-start step losses sit near the coin-flip value") {
    const double ln2 = std::log(2.0);
    Rng rng(7);
    AcganModel model(small_config(), rng);
    Rng data_rng(8);
    Matrix batch(32, 6);
    for (auto& v : batch.vec()) v = data_rng.uniform();
    std::vector<int> labels(32, 1);
    for (std::size_t i = 24; i < 32; ++i) labels[i] = 0;
    Rng step_rng(9);
    const StepLosses l = model.d_train_step(batch, labels, step_rng);
    CHECK(l.d_loss_real_minority == doctest::Approx(ln2).epsilon(0.5));
    CHECK(l.d_loss_fake_minority == doctest::Approx(ln2).epsilon(0.5));
    CHECK(model.g_train_step(32, step_rng) == doctest::Approx(2 * ln2).epsilon(0.5));
}

TEST_CASE("parameter isolation between the two steps") {
    Rng rng(11);
    AcganModel model(small_config(), rng);
    Rng data_rng(12);
    Matrix batch(16, 6);
    for (auto& v : batch.vec()) v = data_rng.uniform();
    std::vector<int> labels(16, 1);
    labels[14] = labels[15] = 0;

    Rng step_rng(13);
    const auto g0 = snapshot_params(model.generator().params());
    model.d_train_step(batch, labels, step_rng);
    CHECK(snapshot_params(model.generator().params()) == g0);

    const auto d0 = snapshot_params(model.discriminator().params());
    model.g_train_step(16, step_rng);
    CHECK(snapshot_params(model.discriminator().params()) == d0);
}

TEST_CASE("evagan and acgan training consume the identical real-row index stream") {
    const std::uint64_t seed = 77;
    TabularDataset data = synth_unbalanced(400, 16, 5, 0.4, seed);
    SplitSpec spec;
    spec.seed = seed;
    auto parts = split(data, spec);

    TrainOptions opts;
    opts.epochs = 2;
    opts.batch_size = 32;
    opts.metric_n = 32;
    opts.seed = seed;
    opts.record_index_trace = true;

    GanConfig cfg = small_config();
    cfg.feature_dim = 5;
    cfg.batch_size = 32;

    Rng br1(seed);
    EvaganModel em(cfg, br1);
    TrainState s1 = TrainState::from_seed(seed);
    const auto r1 = train_evagan(em, s1, parts.train, parts.test, opts);

    Rng br2(seed);
    AcganModel am(cfg, br2);
    TrainState s2 = TrainState::from_seed(seed);
    const auto r2 = train_acgan(am, s2, parts.train, parts.test, opts);

    REQUIRE_FALSE(r1.index_trace.empty());
    CHECK(r1.index_trace == r2.index_trace);
}

TEST_CASE("acgan metric pass leaves the model bit-identical") {
    Rng rng(21);
    AcganModel model(small_config(), rng);
    Rng data_rng(22);
    Matrix maj(20, 6), min(8, 6);
    for (auto& v : maj.vec()) v = data_rng.uniform();
    for (auto& v : min.vec()) v = data_rng.uniform();
    const auto g0 = snapshot_params(model.generator().params());
    const auto d0 = snapshot_params(model.discriminator().params());
    Rng mrng(23);
    const EpochMetrics m = acgan_metrics(model, maj, min, 64, mrng);
    CHECK(snapshot_params(model.generator().params()) == g0);
    CHECK(snapshot_params(model.discriminator().params()) == d0);
    CHECK(m.gen_validity > 0.0);
    CHECK(m.gen_validity < 1.0);
}
