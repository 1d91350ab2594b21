#include "evagan/adam.hpp"

#include <cmath>
#include <stdexcept>

#include "evagan/kernels.hpp"

namespace evagan {

AdamState::AdamState(const std::vector<ParamRef>& params, const AdamConfig& cfg) : cfg_(cfg) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const auto& p : params) {
        m_.emplace_back(p.value->rows(), p.value->cols());
        v_.emplace_back(p.value->rows(), p.value->cols());
    }
}

void AdamState::step(const std::vector<ParamRef>& params) {
    if (params.size() != m_.size())
        throw std::invalid_argument("adam_step: registry size changed since construction");
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i].grad->same_shape(m_[i]))
            throw std::invalid_argument("adam_step: gradient shape mismatch for " +
                                        params[i].name);
        if (!params[i].grad->all_finite())
            throw std::runtime_error("adam_step: non-finite gradient in parameter " +
                                     params[i].name);
    }
    ++t_;
    const double corr1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double corr2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        kernels::active().adam_update(params[i].value->data(), m_[i].data(), v_[i].data(),
                                      params[i].grad->data(), params[i].value->size(), cfg_.lr,
                                      cfg_.beta1, cfg_.beta2, cfg_.epsilon, corr1, corr2);
    }
}

} // namespace evagan
