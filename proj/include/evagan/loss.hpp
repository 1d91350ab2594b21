#pragma once

#include "evagan/matrix.hpp"

namespace evagan {

// Predictions are clamped to [kBceEps, 1 - kBceEps] before the logs.
inline constexpr double kBceEps = 1e-7;

struct BceResult {
    double loss;   // mean over all elements
    Matrix grad;   // d(loss)/d(pred), same shape as pred
};

// Mean binary cross-entropy of predictions in (0,1) against targets in [0,1].
// Throws on empty input, shape mismatch, or out-of-range targets.
BceResult bce_loss(const Matrix& pred, const Matrix& target);

// Loss only, no gradient.
double bce_loss_value(const Matrix& pred, const Matrix& target);

// Constant-target convenience: target matrix filled with t.
BceResult bce_loss_const(const Matrix& pred, double t);

} // namespace evagan
