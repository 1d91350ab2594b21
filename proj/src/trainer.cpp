#include "evagan/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace evagan {

BatchSampler::BatchSampler(const TabularDataset& ds, std::size_t batch_size, Rng& rng)
    : ds_(ds),
      rng_(rng),
      majority_idx_(ds.indices_of(kMajorityLabel)),
      minority_idx_(ds.indices_of(kMinorityLabel)) {
    if (minority_idx_.size() < 2 || majority_idx_.size() < 2)
        throw std::invalid_argument("BatchSampler: each class needs >= 2 samples");
    if (batch_size < 4) throw std::invalid_argument("BatchSampler: batch_size must be >= 4");
    const double share = static_cast<double>(minority_idx_.size()) /
                         static_cast<double>(ds.size());
    b_min_ = static_cast<std::size_t>(std::llround(share * static_cast<double>(batch_size)));
    b_min_ = std::clamp<std::size_t>(b_min_, 2, batch_size - 2);
    b_maj_ = batch_size - b_min_;
}

BatchSampler::Draw BatchSampler::next() {
    // With-replacement draws; scarce minority rows are recycled.
    Draw d;
    d.majority.reserve(b_maj_);
    d.minority.reserve(b_min_);
    for (std::size_t i = 0; i < b_maj_; ++i)
        d.majority.push_back(majority_idx_[rng_.uniform_index(majority_idx_.size())]);
    for (std::size_t i = 0; i < b_min_; ++i)
        d.minority.push_back(minority_idx_[rng_.uniform_index(minority_idx_.size())]);
    return d;
}

Matrix gather_rows(const Matrix& src, const std::vector<std::size_t>& indices) {
    Matrix out(indices.size(), src.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const double* r = src.row(indices[i]);
        std::copy(r, r + src.cols(), out.row(i));
    }
    return out;
}

TrainState TrainState::from_seed(std::uint64_t seed) {
    TrainState s;
    s.model_rng = Rng(seed);
    s.data_rng = Rng(seed ^ 0x9e3779b97f4a7c15ULL);
    return s;
}

std::size_t steps_per_epoch(std::size_t n_train, std::size_t batch_size) {
    return (n_train + batch_size - 1) / batch_size;
}

namespace {

struct TestSlices {
    Matrix majority;
    Matrix minority;
};

TestSlices slice_test(const TabularDataset& test_set) {
    TestSlices s{test_set.rows_of(kMajorityLabel), test_set.rows_of(kMinorityLabel)};
    if (s.majority.rows() == 0 || s.minority.rows() == 0)
        throw std::invalid_argument("train: test split must contain both classes");
    return s;
}

// The epoch body shared by both variants; StepFn runs one d-step + one
// g-step for a sampler draw and returns the step losses.
template <typename StepFn, typename MetricFn>
TrainResult run_loop(TrainState& state, const TabularDataset& train_set,
                     const TrainOptions& options, const MetricHook& hook, StepFn step,
                     MetricFn metrics) {
    if (state.epoch >= options.epochs && options.epochs > 0) return {};
    BatchSampler sampler(train_set, options.batch_size, state.data_rng);
    const std::size_t steps = steps_per_epoch(train_set.size(), options.batch_size);
    TrainResult result;
    result.epochs.reserve(options.epochs - state.epoch);

    for (std::size_t epoch = state.epoch; epoch < options.epochs; ++epoch) {
        StepLosses sums;
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t s = 0; s < steps; ++s) {
            auto draw = sampler.next();
            if (options.record_index_trace) {
                result.index_trace.insert(result.index_trace.end(), draw.majority.begin(),
                                          draw.majority.end());
                result.index_trace.insert(result.index_trace.end(), draw.minority.begin(),
                                          draw.minority.end());
            }
            const StepLosses l = step(draw);
            sums.d_loss_majority += l.d_loss_majority;
            sums.d_loss_real_minority += l.d_loss_real_minority;
            sums.d_loss_fake_minority += l.d_loss_fake_minority;
            sums.g_loss += l.g_loss;
        }
        const auto t1 = std::chrono::steady_clock::now();
        state.wall_seconds += std::chrono::duration<double>(t1 - t0).count();
        state.epoch = epoch + 1;

        EpochMetrics em = metrics(epoch);
        em.epoch = epoch;
        const double ds = static_cast<double>(steps);
        em.losses = {sums.d_loss_real_minority / ds, sums.d_loss_fake_minority / ds,
                     sums.d_loss_majority / ds, sums.g_loss / ds};
        em.wall_seconds = state.wall_seconds;
        if (hook) hook(em);
        result.epochs.push_back(std::move(em));
    }
    return result;
}

} // namespace

TrainResult train_evagan(EvaganModel& model, TrainState& state, const TabularDataset& train_set,
                         const TabularDataset& test_set, const TrainOptions& options,
                         const MetricHook& hook) {
    const TestSlices test = slice_test(test_set);
    return run_loop(
        state, train_set, options, hook,
        [&](const BatchSampler::Draw& draw) {
            const Matrix maj = gather_rows(train_set.features, draw.majority);
            const Matrix min = gather_rows(train_set.features, draw.minority);
            StepLosses l = model.d_train_step(maj, min, state.model_rng);
            l.g_loss = model.g_train_step(options.batch_size, state.model_rng);
            return l;
        },
        [&](std::size_t epoch) {
            Rng metric_rng(options.seed ^ (0xabcdef12345678ULL + epoch));
            return evagan_metrics(model, test.majority, test.minority, options.metric_n,
                                  metric_rng);
        });
}

TrainResult train_acgan(AcganModel& model, TrainState& state, const TabularDataset& train_set,
                        const TabularDataset& test_set, const TrainOptions& options,
                        const MetricHook& hook) {
    const TestSlices test = slice_test(test_set);
    return run_loop(
        state, train_set, options, hook,
        [&](const BatchSampler::Draw& draw) {
            // Same real-sample stream as EVAGAN: majority then minority rows.
            std::vector<std::size_t> all = draw.majority;
            all.insert(all.end(), draw.minority.begin(), draw.minority.end());
            const Matrix batch = gather_rows(train_set.features, all);
            std::vector<int> labels(all.size(), kMajorityLabel);
            for (std::size_t i = draw.majority.size(); i < all.size(); ++i)
                labels[i] = kMinorityLabel;
            StepLosses l = model.d_train_step(batch, labels, state.model_rng);
            l.g_loss = model.g_train_step(options.batch_size, state.model_rng);
            return l;
        },
        [&](std::size_t epoch) {
            Rng metric_rng(options.seed ^ (0xabcdef12345678ULL + epoch));
            return acgan_metrics(model, test.majority, test.minority, options.metric_n,
                                 metric_rng);
        });
}

} // namespace evagan
