#pragma once

#include <functional>
#include <vector>

#include "evagan/acgan_model.hpp"
#include "evagan/data.hpp"
#include "evagan/evagan_model.hpp"
#include "evagan/metrics.hpp"

namespace evagan {

// Per-step stratified batch draw. Both GAN variants consume the same index
// stream for a given seed so comparisons isolate the architecture.
class BatchSampler {
public:
    BatchSampler(const TabularDataset& ds, std::size_t batch_size, Rng& rng);

    struct Draw {
        std::vector<std::size_t> majority;  // indices into the dataset
        std::vector<std::size_t> minority;
    };
    Draw next();

    std::size_t majority_per_batch() const { return b_maj_; }
    std::size_t minority_per_batch() const { return b_min_; }

private:
    const TabularDataset& ds_;
    Rng& rng_;
    std::vector<std::size_t> majority_idx_;
    std::vector<std::size_t> minority_idx_;
    std::size_t b_maj_ = 0;
    std::size_t b_min_ = 0;
};

Matrix gather_rows(const Matrix& src, const std::vector<std::size_t>& indices);

struct TrainOptions {
    std::size_t epochs = 150;
    std::size_t batch_size = 256;
    std::size_t metric_n = 256;  // generated samples per epoch for Eq-style estimates
    std::uint64_t seed = 0;
    bool record_index_trace = false;
};

// Mutable training position; checkpoints serialize this so a resumed run
// continues bit-identically.
struct TrainState {
    Rng model_rng;  // noise, fake labels
    Rng data_rng;   // batch index draws
    std::size_t epoch = 0;
    double wall_seconds = 0.0;

    static TrainState from_seed(std::uint64_t seed);
};

using MetricHook = std::function<void(const EpochMetrics&)>;

struct TrainResult {
    std::vector<EpochMetrics> epochs;
    std::vector<std::size_t> index_trace;  // filled when record_index_trace
};

// Runs epochs [state.epoch, options.epochs): per step one d_train_step then
// one g_train_step; per epoch an infer-mode metric pass over the test split.
// Wall time covers train-step compute only.
TrainResult train_evagan(EvaganModel& model, TrainState& state, const TabularDataset& train_set,
                         const TabularDataset& test_set, const TrainOptions& options,
                         const MetricHook& hook = nullptr);

// Identical loop shape (same step count, same metric cadence) so wall-time
// comparisons are apples-to-apples.
TrainResult train_acgan(AcganModel& model, TrainState& state, const TabularDataset& train_set,
                        const TabularDataset& test_set, const TrainOptions& options,
                        const MetricHook& hook = nullptr);

std::size_t steps_per_epoch(std::size_t n_train, std::size_t batch_size);

} // namespace evagan
