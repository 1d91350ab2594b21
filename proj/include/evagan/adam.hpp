#pragma once

#include <cstdint>
#include <vector>

#include "evagan/layers.hpp"

namespace evagan {

struct AdamConfig {
    double lr = 5e-4;
    double beta1 = 0.5;   // GAN-conventional
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// One optimizer instance per model part (generator or discriminator). Moment
// tensors are laid out to mirror the parameter registry it was built from.
class AdamState {
public:
    AdamState() = default;
    AdamState(const std::vector<ParamRef>& params, const AdamConfig& cfg);

    // Standard bias-corrected Adam step over the registered parameters.
    // Throws on non-finite gradients, naming the offending parameter.
    void step(const std::vector<ParamRef>& params);

    std::uint64_t t() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

    std::vector<Matrix>& moments1() { return m_; }
    std::vector<Matrix>& moments2() { return v_; }
    void set_t(std::uint64_t t) { t_ = t; }

private:
    AdamConfig cfg_;
    std::vector<Matrix> m_;
    std::vector<Matrix> v_;
    std::uint64_t t_ = 0;
};

} // namespace evagan
