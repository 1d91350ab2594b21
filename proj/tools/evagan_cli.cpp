// Command-line front end: train / compare / gridgen / eval.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evagan/baselines.hpp"
#include "evagan/checkpoint.hpp"
#include "evagan/emit.hpp"
#include "evagan/kernels.hpp"
#include "evagan/pgm.hpp"
#include "evagan/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatasetSpec {
    std::string kind;  // synth | csv | mnist
    // csv
    std::string csv_path;
    std::string label_column;
    std::string minority_value;
    // mnist
    std::string mnist_images;
    std::string mnist_labels;
    double keep = 1.0;  // minority undersampling keep fraction
    // synth
    std::size_t synth_majority = 5000;
    std::size_t synth_minority = 50;
    std::size_t synth_dim = 10;
    double synth_separation = 0.4;

    bool operator==(const DatasetSpec&) const = default;
};

struct RunConfig {
    std::string model = "evagan";  // evagan | acgan
    DatasetSpec dataset;
    std::size_t epochs = 150;
    std::size_t batch_size = 256;
    std::size_t latent_dim = 0;  // 0 = auto (100 for mnist, 32 otherwise)
    evagan::AdamConfig optimizer;
    std::uint64_t seed = 0;
    std::string output_dir;
    bool deterministic = false;
    std::size_t metric_n = 256;
    double train_fraction = 0.70;
    double clip_low = 1.0;
    double clip_high = 99.0;
    bool render_grids = false;

    std::size_t effective_latent() const {
        if (latent_dim != 0) return latent_dim;
        return dataset.kind == "mnist" ? 100 : 32;
    }
};

ordered_json dataset_to_json(const DatasetSpec& d) {
    ordered_json j;
    j["kind"] = d.kind;
    if (d.kind == "csv") {
        j["path"] = d.csv_path;
        j["label_column"] = d.label_column;
        j["minority_value"] = d.minority_value;
    } else if (d.kind == "mnist") {
        j["images"] = d.mnist_images;
        j["labels"] = d.mnist_labels;
        j["keep"] = d.keep;
    } else {
        j["n_majority"] = d.synth_majority;
        j["n_minority"] = d.synth_minority;
        j["dim"] = d.synth_dim;
        j["separation"] = d.synth_separation;
    }
    return j;
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["model"] = c.model;
    j["dataset"] = dataset_to_json(c.dataset);
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["latent_dim"] = c.effective_latent();
    j["optimizer"] = {{"lr", c.optimizer.lr},
                      {"beta1", c.optimizer.beta1},
                      {"beta2", c.optimizer.beta2},
                      {"epsilon", c.optimizer.epsilon}};
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["deterministic"] = c.deterministic;
    j["metric_n"] = c.metric_n;
    j["train_fraction"] = c.train_fraction;
    j["clip_low"] = c.clip_low;
    j["clip_high"] = c.clip_high;
    j["render_grids"] = c.render_grids;
    return j;
}

RunConfig config_from_json(const ordered_json& j) {
    RunConfig c;
    try {
        c.model = j.value("model", c.model);
        const auto& d = j.at("dataset");
        c.dataset.kind = d.at("kind");
        if (c.dataset.kind == "csv") {
            c.dataset.csv_path = d.at("path");
            c.dataset.label_column = d.at("label_column");
            c.dataset.minority_value = d.at("minority_value");
        } else if (c.dataset.kind == "mnist") {
            c.dataset.mnist_images = d.at("images");
            c.dataset.mnist_labels = d.at("labels");
            c.dataset.keep = d.value("keep", 1.0);
        } else if (c.dataset.kind == "synth") {
            c.dataset.synth_majority = d.value("n_majority", c.dataset.synth_majority);
            c.dataset.synth_minority = d.value("n_minority", c.dataset.synth_minority);
            c.dataset.synth_dim = d.value("dim", c.dataset.synth_dim);
            c.dataset.synth_separation = d.value("separation", c.dataset.synth_separation);
        } else {
            throw ConfigError("unknown dataset kind '" + c.dataset.kind + "'");
        }
        c.epochs = j.value("epochs", c.epochs);
        c.batch_size = j.value("batch_size", c.batch_size);
        c.latent_dim = j.value("latent_dim", c.latent_dim);
        if (j.contains("optimizer")) {
            const auto& o = j.at("optimizer");
            c.optimizer.lr = o.value("lr", c.optimizer.lr);
            c.optimizer.beta1 = o.value("beta1", c.optimizer.beta1);
            c.optimizer.beta2 = o.value("beta2", c.optimizer.beta2);
            c.optimizer.epsilon = o.value("epsilon", c.optimizer.epsilon);
        }
        c.seed = j.value("seed", c.seed);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.deterministic = j.value("deterministic", c.deterministic);
        c.metric_n = j.value("metric_n", c.metric_n);
        c.train_fraction = j.value("train_fraction", c.train_fraction);
        c.clip_low = j.value("clip_low", c.clip_low);
        c.clip_high = j.value("clip_high", c.clip_high);
        c.render_grids = j.value("render_grids", c.render_grids);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config json: ") + e.what());
    }
    return c;
}

void validate_config(const RunConfig& c) {
    if (c.model != "evagan" && c.model != "acgan")
        throw ConfigError("model must be 'evagan' or 'acgan', got '" + c.model + "'");
    if (c.batch_size < 2)
        throw ConfigError("batch_size must be >= 2 (batchnorm needs at least two samples)");
    if (c.epochs == 0) throw ConfigError("epochs must be >= 1");
    if (c.train_fraction <= 0.0 || c.train_fraction >= 1.0)
        throw ConfigError("train_fraction must be in (0,1)");
    if (c.dataset.kind == "mnist" && (c.dataset.keep <= 0.0 || c.dataset.keep > 1.0))
        throw ConfigError("mnist keep fraction must be in (0,1]");
    if (c.render_grids && c.dataset.kind != "mnist")
        throw ConfigError("qualitative grids are image-mode only");
}

std::string default_output_dir() {
    if (const char* env = std::getenv("EVAGAN_OUT_DIR")) return env;
    return "runs";
}

struct PreparedData {
    evagan::TabularDataset train;
    evagan::TabularDataset test;
    bool image_mode = false;
    std::string preprocess_report;  // JSON, csv mode only
};

PreparedData prepare_data(const RunConfig& c) {
    PreparedData out;
    evagan::TabularDataset full;
    if (c.dataset.kind == "csv") {
        const auto raw = evagan::load_tabular_csv(c.dataset.csv_path, c.dataset.label_column,
                                                  c.dataset.minority_value);
        evagan::PreprocessOptions opts;
        opts.clip_low_pct = c.clip_low;
        opts.clip_high_pct = c.clip_high;
        full = evagan::preprocess(raw, opts);
        out.preprocess_report = full.provenance.to_json();
    } else if (c.dataset.kind == "mnist") {
        auto mnist = evagan::filter_binary_digits(
            evagan::load_mnist_idx(c.dataset.mnist_images, c.dataset.mnist_labels));
        mnist = evagan::undersample_minority(mnist, c.dataset.keep, c.seed);
        full = evagan::as_tabular(mnist);
        out.image_mode = true;
    } else {
        full = evagan::synth_unbalanced(c.dataset.synth_majority, c.dataset.synth_minority,
                                        c.dataset.synth_dim, c.dataset.synth_separation, c.seed);
    }
    evagan::SplitSpec spec;
    spec.train_fraction = c.train_fraction;
    spec.seed = c.seed;
    auto parts = evagan::split(full, spec);
    out.train = std::move(parts.train);
    out.test = std::move(parts.test);
    return out;
}

evagan::GanConfig gan_config(const RunConfig& c, std::size_t feature_dim) {
    evagan::GanConfig g;
    g.latent_dim = c.effective_latent();
    g.feature_dim = feature_dim;
    g.batch_size = c.batch_size;
    g.epochs = c.epochs;
    g.optimizer = c.optimizer;
    return g;
}

void apply_backend(const RunConfig& c) {
    if (c.deterministic) {
        evagan::kernels::force_backend(evagan::kernels::Backend::scalar);
    } else {
        evagan::kernels::autoselect_backend();
    }
}

void write_grid(evagan::ConditionalGenerator& gen, bool acgan, std::size_t latent,
                std::size_t epoch, std::uint64_t seed, const fs::path& dir) {
    evagan::Rng rng(seed ^ (0x5eedULL + epoch));
    const std::size_t n = 100;
    const evagan::Matrix z = evagan::draw_noise(n, latent, rng);
    std::vector<int> labels(n, 0);
    if (acgan) {
        for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 2);
    }
    const evagan::Matrix imgs = gen.forward(z, labels, evagan::Mode::infer);
    const evagan::Matrix grid = evagan::tile_grid(imgs, 10, 10, 28);
    evagan::write_pgm(grid, (dir / ("epoch_" + std::to_string(epoch) + ".pgm")).string());
}

struct RunOutput {
    std::vector<evagan::EpochMetrics> epochs;
    fs::path dir;
};

RunOutput run_training(const RunConfig& cfg, const std::string& run_name) {
    apply_backend(cfg);
    const PreparedData data = prepare_data(cfg);
    const fs::path dir =
        fs::path(cfg.output_dir.empty() ? default_output_dir() : cfg.output_dir) / run_name;
    fs::create_directories(dir);

    evagan::TrainOptions opts;
    opts.epochs = cfg.epochs;
    opts.batch_size = cfg.batch_size;
    opts.metric_n = cfg.metric_n;
    opts.seed = cfg.seed;

    evagan::TrainState state = evagan::TrainState::from_seed(cfg.seed);
    evagan::Rng build_rng(cfg.seed);
    const evagan::GanConfig gcfg = gan_config(cfg, data.train.features.cols());

    RunOutput out;
    out.dir = dir;
    // Deterministic runs must produce byte-identical checkpoints; the measured
    // wall time still goes to timings.csv.
    auto scrub_wall = [&] {
        if (cfg.deterministic) state.wall_seconds = 0.0;
    };
    if (cfg.model == "evagan") {
        evagan::EvaganModel model(gcfg, build_rng);
        evagan::MetricHook hook;
        if (cfg.render_grids) {
            hook = [&](const evagan::EpochMetrics& em) {
                write_grid(model.generator(), false, gcfg.latent_dim, em.epoch, cfg.seed, dir);
            };
        }
        out.epochs = evagan::train_evagan(model, state, data.train, data.test, opts, hook).epochs;
        scrub_wall();
        evagan::save_evagan_checkpoint((dir / "checkpoint.bin").string(), model, state);
    } else {
        evagan::AcganModel model(gcfg, build_rng);
        evagan::MetricHook hook;
        if (cfg.render_grids) {
            hook = [&](const evagan::EpochMetrics& em) {
                write_grid(model.generator(), true, gcfg.latent_dim, em.epoch, cfg.seed, dir);
            };
        }
        out.epochs = evagan::train_acgan(model, state, data.train, data.test, opts, hook).epochs;
        scrub_wall();
        evagan::save_acgan_checkpoint((dir / "checkpoint.bin").string(), model, state);
    }

    evagan::emit_metrics_csv(out.epochs, (dir / "metrics.csv").string(), cfg.deterministic);
    evagan::emit_timings_csv(out.epochs, (dir / "timings.csv").string());

    ordered_json manifest;
    manifest["version"] = evagan::version_string();
    manifest["config"] = config_to_json(cfg);
    manifest["feature_dim"] = data.train.features.cols();
    manifest["train_rows"] = data.train.size();
    manifest["test_rows"] = data.test.size();
    manifest["backend"] = evagan::kernels::active_backend() == evagan::kernels::Backend::avx2
                              ? "avx2"
                              : "scalar";
    evagan::emit_manifest(manifest.dump(2), (dir / "manifest.json").string());
    if (!data.preprocess_report.empty()) {
        std::ofstream rep(dir / "preprocess_report.json");
        rep << data.preprocess_report << '\n';
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> per_epoch_times(const std::vector<evagan::EpochMetrics>& epochs) {
    std::vector<double> dt;
    double prev = 0.0;
    for (const auto& e : epochs) {
        dt.push_back(e.wall_seconds - prev);
        prev = e.wall_seconds;
    }
    return dt;
}

int cmd_train(const RunConfig& cfg) {
    validate_config(cfg);
    const auto out = run_training(cfg, cfg.model);
    const auto& last = out.epochs.back();
    std::cout << "run_dir=" << out.dir.string() << "\n"
              << "epochs=" << out.epochs.size() << "\n"
              << "final gen_validity=" << last.gen_validity
              << " fake_min_eva=" << last.fake_min_eva
              << " real_maj_est=" << last.real_maj_est
              << " real_min_eva=" << last.real_min_eva << "\n";
    return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b,
                const std::string& report_path) {
    auto load = [](const std::string& p) {
        std::ifstream in(p);
        if (!in) throw ConfigError("cannot open config " + p);
        ordered_json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config " + p + ": " + e.what());
        }
        return config_from_json(j);
    };
    RunConfig a = load(path_a);
    RunConfig b = load(path_b);
    validate_config(a);
    validate_config(b);
    if (!(a.dataset == b.dataset) || a.seed != b.seed)
        throw ConfigError("compare: configs must share dataset and seed");

    const auto ra = run_training(a, "compare_" + a.model + "_a");
    const auto rb = run_training(b, "compare_" + b.model + "_b");

    auto summarize = [](const RunConfig& c, const RunOutput& r) {
        const auto& last = r.epochs.back();
        ordered_json j;
        j["model"] = c.model;
        j["run_dir"] = r.dir.string();
        j["median_epoch_seconds"] = median(per_epoch_times(r.epochs));
        j["final"] = {{"gen_validity", last.gen_validity},
                      {"fake_min_eva", last.fake_min_eva},
                      {"real_maj_est", last.real_maj_est},
                      {"real_min_eva", last.real_min_eva}};
        return j;
    };
    ordered_json report;
    report["a"] = summarize(a, ra);
    report["b"] = summarize(b, rb);
    const std::string text = report.dump(2);
    std::cout << text << "\n";
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("compare: cannot write " + report_path);
        out << text << '\n';
    }
    return 0;
}

int cmd_gridgen(const std::string& checkpoint, const std::string& out_dir, std::uint64_t seed) {
    const std::string kind = evagan::peek_checkpoint_kind(checkpoint);
    fs::create_directories(out_dir);
    if (kind == "evagan") {
        auto loaded = evagan::load_evagan_checkpoint(checkpoint);
        if (loaded.model->config().feature_dim != 784)
            throw ConfigError("qualitative grids are image-mode only (feature_dim " +
                              std::to_string(loaded.model->config().feature_dim) + " != 784)");
        write_grid(loaded.model->generator(), false, loaded.model->config().latent_dim,
                   loaded.state.epoch, seed, out_dir);
    } else {
        auto loaded = evagan::load_acgan_checkpoint(checkpoint);
        if (loaded.model->config().feature_dim != 784)
            throw ConfigError("qualitative grids are image-mode only (feature_dim " +
                              std::to_string(loaded.model->config().feature_dim) + " != 784)");
        write_grid(loaded.model->generator(), true, loaded.model->config().latent_dim,
                   loaded.state.epoch, seed, out_dir);
    }
    return 0;
}

int cmd_eval(const std::string& checkpoint, const RunConfig& data_cfg, bool with_baselines) {
    apply_backend(data_cfg);
    const PreparedData data = prepare_data(data_cfg);
    const std::string kind = evagan::peek_checkpoint_kind(checkpoint);

    const evagan::Matrix maj = data.test.rows_of(evagan::kMajorityLabel);
    const evagan::Matrix min = data.test.rows_of(evagan::kMinorityLabel);
    if (min.rows() == 0) throw std::runtime_error("eval: empty minority slice in test split");

    evagan::Rng rng(data_cfg.seed);
    evagan::EpochMetrics m;
    evagan::Matrix generated;
    std::size_t model_width = 0;
    if (kind == "evagan") {
        auto loaded = evagan::load_evagan_checkpoint(checkpoint);
        model_width = loaded.model->config().feature_dim;
        if (model_width != data.test.features.cols())
            throw std::runtime_error("eval: checkpoint feature width " +
                                     std::to_string(model_width) + " != dataset width " +
                                     std::to_string(data.test.features.cols()));
        m = evagan::evagan_metrics(*loaded.model, maj, min, data_cfg.metric_n, rng);
        evagan::Rng gen_rng(data_cfg.seed);
        generated = loaded.model->generate(data_cfg.metric_n, gen_rng);
    } else {
        auto loaded = evagan::load_acgan_checkpoint(checkpoint);
        model_width = loaded.model->config().feature_dim;
        if (model_width != data.test.features.cols())
            throw std::runtime_error("eval: checkpoint feature width " +
                                     std::to_string(model_width) + " != dataset width " +
                                     std::to_string(data.test.features.cols()));
        m = evagan::acgan_metrics(*loaded.model, maj, min, data_cfg.metric_n, rng);
        evagan::Rng gen_rng(data_cfg.seed);
        const std::vector<int> labels(data_cfg.metric_n, evagan::kMinorityLabel);
        generated = loaded.model->generate(data_cfg.metric_n, labels, gen_rng);
    }

    std::cout << "model=" << kind << "\n"
              << "gen_validity=" << m.gen_validity << "\n"
              << "fake_min_eva=" << m.fake_min_eva << "\n"
              << "real_maj_est=" << m.real_maj_est << "\n"
              << "real_min_eva=" << m.real_min_eva << "\n";

    if (with_baselines) {
        for (const char* name : {"lr", "knn", "nb"}) {
            auto clf = evagan::fit_baseline(evagan::baseline_from_string(name), data.train);
            const auto r = evagan::evaluate_baseline(*clf, maj, min, generated);
            std::cout << "baseline " << r.classifier << ": real_maj_est=" << r.real_maj_est
                      << " real_min_eva=" << r.real_min_eva
                      << " fake_min_eva=" << r.fake_min_eva << "\n";
        }
    }
    return 0;
}

void add_dataset_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--dataset", cfg.dataset.kind, "Dataset kind: synth, csv or mnist")
        ->check(CLI::IsMember({"synth", "csv", "mnist"}));
    cmd->add_option("--csv-path", cfg.dataset.csv_path);
    cmd->add_option("--label-column", cfg.dataset.label_column);
    cmd->add_option("--minority-value", cfg.dataset.minority_value);
    cmd->add_option("--mnist-images", cfg.dataset.mnist_images);
    cmd->add_option("--mnist-labels", cfg.dataset.mnist_labels);
    cmd->add_option("--keep", cfg.dataset.keep,
                    "Minority keep fraction (1.0, 0.5, 0.1, 0.01 mirror the undersampling "
                    "scenarios)");
    cmd->add_option("--synth-majority", cfg.dataset.synth_majority);
    cmd->add_option("--synth-minority", cfg.dataset.synth_minority);
    cmd->add_option("--synth-dim", cfg.dataset.synth_dim);
    cmd->add_option("--synth-sep", cfg.dataset.synth_separation);
    cmd->add_option("--train-fraction", cfg.train_fraction);
    cmd->add_option("--clip-low", cfg.clip_low);
    cmd->add_option("--clip-high", cfg.clip_high);
    cmd->add_option("--seed", cfg.seed);
    cmd->add_option("--metric-n", cfg.metric_n);
    cmd->add_flag("--deterministic", cfg.deterministic,
                  "Scalar kernels + zeroed wall column for byte-stable outputs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EVAGAN/ACGAN adversarial training engine"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.dataset.kind = "synth";
    std::string config_file;

    auto* train = app.add_subcommand("train", "Train a model and emit metric traces");
    train->add_option("--config", config_file, "JSON config file (flags override it)");
    train->add_option("--model", cfg.model)->check(CLI::IsMember({"evagan", "acgan"}));
    add_dataset_flags(train, cfg);
    train->add_option("--epochs", cfg.epochs);
    train->add_option("--batch-size", cfg.batch_size);
    train->add_option("--latent-dim", cfg.latent_dim);
    train->add_option("--lr", cfg.optimizer.lr);
    train->add_option("--beta1", cfg.optimizer.beta1);
    train->add_option("--beta2", cfg.optimizer.beta2);
    train->add_option("--out", cfg.output_dir, "Output directory (default $EVAGAN_OUT_DIR)");
    train->add_flag("--render-grids", cfg.render_grids, "Write a PGM digit grid per epoch");

    std::string cmp_a, cmp_b, cmp_report;
    auto* compare = app.add_subcommand("compare", "Train two configs on the same data stream");
    compare->add_option("config_a", cmp_a)->required();
    compare->add_option("config_b", cmp_b)->required();
    compare->add_option("--report", cmp_report, "Write the comparison JSON here too");

    std::string ckpt_path, grid_out;
    std::uint64_t grid_seed = 0;
    auto* gridgen = app.add_subcommand("gridgen", "Render a generator grid from a checkpoint");
    gridgen->add_option("--checkpoint", ckpt_path)->required();
    gridgen->add_option("--out", grid_out)->required();
    gridgen->add_option("--seed", grid_seed);

    RunConfig eval_cfg;
    eval_cfg.dataset.kind = "synth";
    std::string eval_ckpt;
    bool eval_baselines = false;
    auto* eval = app.add_subcommand("eval", "Metrics for a checkpoint on a dataset");
    eval->add_option("--checkpoint", eval_ckpt)->required();
    add_dataset_flags(eval, eval_cfg);
    eval->add_flag("--baselines", eval_baselines, "Also fit and report LR/KNN/NB");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*train) {
            if (!config_file.empty()) {
                std::ifstream in(config_file);
                if (!in) throw ConfigError("cannot open config " + config_file);
                ordered_json j;
                try {
                    in >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw ConfigError("config " + config_file + ": " + e.what());
                }
                RunConfig merged = config_from_json(j);
                // Flags given on the command line win over the file.
                auto given = [&](const char* flag) { return train->count(flag) > 0; };
                if (given("--model")) merged.model = cfg.model;
                if (given("--dataset")) merged.dataset.kind = cfg.dataset.kind;
                if (given("--csv-path")) merged.dataset.csv_path = cfg.dataset.csv_path;
                if (given("--label-column")) merged.dataset.label_column = cfg.dataset.label_column;
                if (given("--minority-value"))
                    merged.dataset.minority_value = cfg.dataset.minority_value;
                if (given("--mnist-images")) merged.dataset.mnist_images = cfg.dataset.mnist_images;
                if (given("--mnist-labels")) merged.dataset.mnist_labels = cfg.dataset.mnist_labels;
                if (given("--keep")) merged.dataset.keep = cfg.dataset.keep;
                if (given("--synth-majority"))
                    merged.dataset.synth_majority = cfg.dataset.synth_majority;
                if (given("--synth-minority"))
                    merged.dataset.synth_minority = cfg.dataset.synth_minority;
                if (given("--synth-dim")) merged.dataset.synth_dim = cfg.dataset.synth_dim;
                if (given("--synth-sep"))
                    merged.dataset.synth_separation = cfg.dataset.synth_separation;
                if (given("--train-fraction")) merged.train_fraction = cfg.train_fraction;
                if (given("--clip-low")) merged.clip_low = cfg.clip_low;
                if (given("--clip-high")) merged.clip_high = cfg.clip_high;
                if (given("--seed")) merged.seed = cfg.seed;
                if (given("--metric-n")) merged.metric_n = cfg.metric_n;
                if (given("--deterministic")) merged.deterministic = cfg.deterministic;
                if (given("--epochs")) merged.epochs = cfg.epochs;
                if (given("--batch-size")) merged.batch_size = cfg.batch_size;
                if (given("--latent-dim")) merged.latent_dim = cfg.latent_dim;
                if (given("--lr")) merged.optimizer.lr = cfg.optimizer.lr;
                if (given("--beta1")) merged.optimizer.beta1 = cfg.optimizer.beta1;
                if (given("--beta2")) merged.optimizer.beta2 = cfg.optimizer.beta2;
                if (given("--out")) merged.output_dir = cfg.output_dir;
                if (given("--render-grids")) merged.render_grids = cfg.render_grids;
                cfg = merged;
            }
            return cmd_train(cfg);
        }
        if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_report);
        if (*gridgen) return cmd_gridgen(ckpt_path, grid_out, grid_seed);
        if (*eval) return cmd_eval(eval_ckpt, eval_cfg, eval_baselines);
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
