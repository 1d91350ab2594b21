#pragma once

#include <memory>
#include <string>
#include <vector>

#include "evagan/layers.hpp"

namespace evagan {

// An ordered stack of layers with a flat parameter registry.
class Network {
public:
    Network() = default;

    Network& add(std::unique_ptr<Layer> layer);
    Network& dense(std::size_t n_in, std::size_t n_out, Activation act);
    Network& batchnorm(std::size_t width);

    Matrix forward(const Matrix& input, Mode mode);
    // Gradient w.r.t. the input; parameter gradients accumulate in the
    // registry. Requires a preceding train-mode forward.
    Matrix backward(const Matrix& upstream);

    std::vector<ParamRef> params();
    void zero_grad();

    std::size_t input_width() const;
    std::size_t output_width() const;
    std::size_t layer_count() const { return layers_.size(); }
    Layer& layer(std::size_t i) { return *layers_[i]; }

    void init(Rng& rng);

    void set_track_stats(bool on) {
        for (auto& l : layers_) l->set_track_stats(on);
    }

private:
    std::vector<std::unique_ptr<Layer>> layers_;
    bool forwarded_train_ = false;
};

// Collects param values into one flat vector / restores them; used by the
// bitwise freeze assertions and the checkpoints.
std::vector<double> snapshot_params(const std::vector<ParamRef>& params);

} // namespace evagan
