#pragma once

#include "evagan/evagan_model.hpp"

namespace evagan {

// ACGAN heads: [0] source (real=1/fake=0), [1] class (normal=1/bot=0, one
// sigmoid unit so the polarity lines up with the EVAGAN heads).
inline constexpr int kAcganHeadSource = 0;
inline constexpr int kAcganHeadClass = 1;

class AcganModel {
public:
    AcganModel(const GanConfig& config, Rng& rng);

    // Class-conditional samples; labels drawn uniformly over {0,1} when not
    // supplied.
    Matrix generate(std::size_t n, const std::vector<int>& labels, Rng& rng,
                    Mode mode = Mode::infer);
    std::vector<int> draw_labels(std::size_t n, Rng& rng);

    // One Adam update of D: source head real->1/fake->0; class head trained
    // on the true labels of the real batch and the drawn labels of the fake
    // batch. Returns per-batch mean losses in StepLosses (real batch in
    // d_loss_real_minority, fake batch in d_loss_fake_minority, class-head
    // loss on real data in d_loss_majority).
    StepLosses d_train_step(const Matrix& real_batch, const std::vector<int>& real_labels,
                            Rng& rng);

    // One Adam update of G through the frozen D: source->1, class->the labels
    // fed to G.
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

} // namespace evagan
