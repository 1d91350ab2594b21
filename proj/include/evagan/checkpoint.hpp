#pragma once

#include <memory>
#include <string>

#include "evagan/acgan_model.hpp"
#include "evagan/evagan_model.hpp"
#include "evagan/trainer.hpp"

namespace evagan {

// Binary checkpoint container (host little-endian doubles): magic + format
// version, model-kind tag, config, every parameter and batchnorm buffer,
// both optimizer states, the training rngs, epoch counter and accumulated
// wall time. Loading and resuming in deterministic mode reproduces the
// uninterrupted run bit for bit.

void save_evagan_checkpoint(const std::string& path, EvaganModel& model,
                            const TrainState& state);
void save_acgan_checkpoint(const std::string& path, AcganModel& model, const TrainState& state);

// "evagan" or "acgan"; throws on a malformed file.
std::string peek_checkpoint_kind(const std::string& path);

struct LoadedEvagan {
    std::unique_ptr<EvaganModel> model;
    TrainState state{};
};
struct LoadedAcgan {
    std::unique_ptr<AcganModel> model;
    TrainState state{};
};

LoadedEvagan load_evagan_checkpoint(const std::string& path);
LoadedAcgan load_acgan_checkpoint(const std::string& path);

} // namespace evagan
