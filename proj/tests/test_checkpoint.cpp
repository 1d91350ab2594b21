#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "evagan/checkpoint.hpp"
#include "evagan/kernels.hpp"

using namespace evagan;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "evagan_test_ckpt";
    fs::create_directories(dir);
    return dir / name;
}

GanConfig small_config() {
    GanConfig cfg;
    cfg.feature_dim = 5;
    cfg.latent_dim = 6;
    cfg.g_widths = {8, 12};
    cfg.d_widths = {12, 8};
    cfg.batch_size = 16;
    return cfg;
}

TabularDataset make_data(std::uint64_t seed) { return synth_unbalanced(300, 20, 5, 0.5, seed); }

} // namespace

TEST_CASE("evagan checkpoint round-trips parameters, buffers and rngs bit-exactly") {
    kernels::force_backend(kernels::Backend::scalar);
    Rng build(1);
    EvaganModel model(small_config(), build);

    // Move everything off the initial values first.
    TabularDataset data = make_data(2);
    SplitSpec spec;
    spec.seed = 2;
    auto parts = split(data, spec);
    TrainOptions opts;
    opts.epochs = 2;
    opts.batch_size = 16;
    opts.metric_n = 16;
    opts.seed = 2;
    TrainState state = TrainState::from_seed(2);
    train_evagan(model, state, parts.train, parts.test, opts);

    const auto path = temp_file("evagan.ckpt");
    save_evagan_checkpoint(path.string(), model, state);
    CHECK(peek_checkpoint_kind(path.string()) == "evagan");

    auto loaded = load_evagan_checkpoint(path.string());
    CHECK(snapshot_params(loaded.model->generator().params()) ==
          snapshot_params(model.generator().params()));
    CHECK(snapshot_params(loaded.model->discriminator().params()) ==
          snapshot_params(model.discriminator().params()));
    CHECK(loaded.model->g_optimizer().t() == model.g_optimizer().t());
    CHECK(loaded.model->d_optimizer().t() == model.d_optimizer().t());
    CHECK(loaded.model->g_optimizer().moments1() == model.g_optimizer().moments1());
    CHECK(loaded.model->d_optimizer().moments2() == model.d_optimizer().moments2());
    CHECK(loaded.state.epoch == state.epoch);
    CHECK(loaded.state.model_rng.state() == state.model_rng.state());
    CHECK(loaded.state.data_rng.state() == state.data_rng.state());
}

TEST_CASE("a resumed run reproduces the uninterrupted run bit for bit") {
    kernels::force_backend(kernels::Backend::scalar);
    TabularDataset data = make_data(7);
    SplitSpec spec;
    spec.seed = 7;
    auto parts = split(data, spec);
    TrainOptions opts;
    opts.batch_size = 16;
    opts.metric_n = 16;
    opts.seed = 7;

    // Uninterrupted: 4 epochs.
    Rng b1(7);
    EvaganModel straight(small_config(), b1);
    TrainState s1 = TrainState::from_seed(7);
    opts.epochs = 4;
    const auto full = train_evagan(straight, s1, parts.train, parts.test, opts);

    // Interrupted: 2 epochs, checkpoint, reload, 2 more.
    Rng b2(7);
    EvaganModel part1(small_config(), b2);
    TrainState s2 = TrainState::from_seed(7);
    opts.epochs = 2;
    train_evagan(part1, s2, parts.train, parts.test, opts);
    const auto path = temp_file("resume.ckpt");
    save_evagan_checkpoint(path.string(), part1, s2);

    auto resumed = load_evagan_checkpoint(path.string());
    opts.epochs = 4;
    const auto tail =
        train_evagan(*resumed.model, resumed.state, parts.train, parts.test, opts);
    REQUIRE(tail.epochs.size() == 2);

    CHECK(snapshot_params(resumed.model->generator().params()) ==
          snapshot_params(straight.generator().params()));
    CHECK(snapshot_params(resumed.model->discriminator().params()) ==
          snapshot_params(straight.discriminator().params()));
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& a = full.epochs[2 + i];
        const auto& b = tail.epochs[i];
        CHECK(a.epoch == b.epoch);
        CHECK(a.gen_validity == b.gen_validity);  // bitwise: same arithmetic path
        CHECK(a.fake_min_eva == b.fake_min_eva);
        CHECK(a.real_maj_est == b.real_maj_est);
        CHECK(a.real_min_eva == b.real_min_eva);
        CHECK(a.losses.g_loss == b.losses.g_loss);
    }
}

TEST_CASE("acgan checkpoints carry their own kind tag") {
    kernels::force_backend(kernels::Backend::scalar);
    Rng build(3);
    AcganModel model(small_config(), build);
    TrainState state = TrainState::from_seed(3);
    const auto path = temp_file("acgan.ckpt");
    save_acgan_checkpoint(path.string(), model, state);
    CHECK(peek_checkpoint_kind(path.string()) == "acgan");
    CHECK_THROWS_AS(load_evagan_checkpoint(path.string()), std::runtime_error);
    auto loaded = load_acgan_checkpoint(path.string());
    CHECK(snapshot_params(loaded.model->generator().params()) ==
          snapshot_params(model.generator().params()));
}

TEST_CASE("malformed checkpoint files are rejected") {
    const auto path = temp_file("garbage.ckpt");
    {
        std::ofstream out(path, std::ios::binary);
        out << "not a checkpoint";
    }
    CHECK_THROWS_AS(peek_checkpoint_kind(path.string()), std::runtime_error);
    CHECK_THROWS_AS(load_evagan_checkpoint("/no/such/file.ckpt"), std::runtime_error);

    // Truncated mid-tensor.
    kernels::force_backend(kernels::Backend::scalar);
    Rng build(4);
    EvaganModel model(small_config(), build);
    TrainState state = TrainState::from_seed(4);
    const auto good = temp_file("good.ckpt");
    save_evagan_checkpoint(good.string(), model, state);
    std::ifstream in(good, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    const auto cut = temp_file("cut.ckpt");
    std::ofstream out(cut, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() * 2 / 3));
    out.close();
    CHECK_THROWS_AS(load_evagan_checkpoint(cut.string()), std::runtime_error);
}
