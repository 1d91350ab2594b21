#pragma once

#include <string>
#include <vector>

#include "evagan/acgan_model.hpp"
#include "evagan/evagan_model.hpp"

namespace evagan {

// One record per epoch: the four estimation values plus per-head losses and
// cumulative training wall time.
struct EpochMetrics {
    std::size_t epoch = 0;
    double gen_validity = 0.0;   // mean source-head output on generated samples
    double fake_min_eva = 0.0;   // mean minority-head output on generated samples
    double real_maj_est = 0.0;   // mean majority-head output on real normal test rows
    double real_min_eva = 0.0;   // mean minority-head output on real bot test rows
    StepLosses losses;           // per-epoch means
    double wall_seconds = 0.0;   // cumulative train-step time
};

// All four evaluate the model in infer mode and never mutate it.
double gen_validity(EvaganModel& model, std::size_t n, Rng& rng);
double fake_min_eva(EvaganModel& model, std::size_t n, Rng& rng);
double real_maj_est(EvaganModel& model, const Matrix& test_majority);
double real_min_eva(EvaganModel& model, const Matrix& test_minority);

EpochMetrics evagan_metrics(EvaganModel& model, const Matrix& test_majority,
                            const Matrix& test_minority, std::size_t n, Rng& rng);

// ACGAN analogue: source head for validity, class head (bot=0 polarity) for
// the three class estimations. fake_min_eva uses minority-labelled samples
// only; the value is reported but not asserted across models.
EpochMetrics acgan_metrics(AcganModel& model, const Matrix& test_majority,
                           const Matrix& test_minority, std::size_t n, Rng& rng);

} // namespace evagan
