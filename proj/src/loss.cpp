#include "evagan/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evagan {

BceResult bce_loss(const Matrix& pred, const Matrix& target) {
    if (pred.empty()) throw std::invalid_argument("bce_loss: empty input");
    require_same_shape(pred, target, "bce_loss");
    const std::size_t n = pred.size();
    BceResult out{0.0, Matrix(pred.rows(), pred.cols())};
    for (std::size_t i = 0; i < n; ++i) {
        const double t = target.vec()[i];
        if (t < 0.0 || t > 1.0)
            throw std::invalid_argument("bce_loss: target " + std::to_string(t) +
                                        " outside [0,1]");
        const double p = std::clamp(pred.vec()[i], kBceEps, 1.0 - kBceEps);
        out.loss += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
        out.grad.vec()[i] = (-(t / p) + (1.0 - t) / (1.0 - p)) / static_cast<double>(n);
    }
    out.loss /= static_cast<double>(n);
    return out;
}

double bce_loss_value(const Matrix& pred, const Matrix& target) {
    if (pred.empty()) throw std::invalid_argument("bce_loss: empty input");
    require_same_shape(pred, target, "bce_loss");
    double loss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double t = target.vec()[i];
        if (t < 0.0 || t > 1.0)
            throw std::invalid_argument("bce_loss: target " + std::to_string(t) +
                                        " outside [0,1]");
        const double p = std::clamp(pred.vec()[i], kBceEps, 1.0 - kBceEps);
        loss += -(t * std::log(p) + (1.0 - t) * std::log(1.0 - p));
    }
    return loss / static_cast<double>(pred.size());
}

BceResult bce_loss_const(const Matrix& pred, double t) {
    Matrix target(pred.rows(), pred.cols(), t);
    return bce_loss(pred, target);
}

} // namespace evagan
