#include "evagan/network.hpp"

#include <stdexcept>

namespace evagan {

Network& Network::add(std::unique_ptr<Layer> layer) {
    layers_.push_back(std::move(layer));
    return *this;
}

Network& Network::dense(std::size_t n_in, std::size_t n_out, Activation act) {
    return add(std::make_unique<DenseLayer>(n_in, n_out, act));
}

Network& Network::batchnorm(std::size_t width) {
    return add(std::make_unique<BatchNormLayer>(width));
}

Matrix Network::forward(const Matrix& input, Mode mode) {
    if (layers_.empty()) throw std::logic_error("Network::forward on empty network");
    if (input.cols() != input_width()) {
        throw std::invalid_argument("network_forward: input width " +
                                    std::to_string(input.cols()) + " != expected " +
                                    std::to_string(input_width()));
    }
    Matrix x = input;
    for (auto& l : layers_) x = l->forward(x, mode);
    if (mode == Mode::train) forwarded_train_ = true;
    return x;
}

Matrix Network::backward(const Matrix& upstream) {
    if (!forwarded_train_)
        throw std::logic_error("network_backward without a preceding train-mode forward");
    Matrix g = upstream;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

std::vector<ParamRef> Network::params() {
    std::vector<ParamRef> out;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        for (auto& p : layers_[i]->params()) {
            p.name = "layer" + std::to_string(i) + "." + p.name;
            out.push_back(p);
        }
    }
    return out;
}

void Network::zero_grad() {
    for (auto& l : layers_) l->zero_grad();
}

std::size_t Network::input_width() const {
    if (layers_.empty()) return 0;
    return layers_.front()->input_width();
}

std::size_t Network::output_width() const {
    if (layers_.empty()) return 0;
    return layers_.back()->output_width();
}

void Network::init(Rng& rng) {
    for (auto& l : layers_) {
        if (auto* d = dynamic_cast<DenseLayer*>(l.get())) d->init(rng);
    }
}

std::vector<double> snapshot_params(const std::vector<ParamRef>& params) {
    std::vector<double> out;
    for (const auto& p : params) {
        out.insert(out.end(), p.value->vec().begin(), p.value->vec().end());
    }
    return out;
}

} // namespace evagan
