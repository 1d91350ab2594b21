#pragma once

#include <memory>
#include <string>

#include "evagan/data.hpp"

namespace evagan {

// Black-box comparison classifiers. predict() returns the bot-probability
// (probability of the minority class, label 0) per row.
class BaselineClassifier {
public:
    virtual ~BaselineClassifier() = default;
    virtual std::vector<double> predict(const Matrix& x) const = 0;
    virtual std::string name() const = 0;
};

enum class BaselineKind { lr, knn, nb };

BaselineKind baseline_from_string(const std::string& s);

// lr: full-batch gradient descent logistic model (500 iterations, lr 0.1).
// knn: k nearest by Euclidean distance, bot-probability = bot fraction among
//      neighbours (k=5 default; throws if k > train size).
// nb: Gaussian per-feature class-conditional model.
std::unique_ptr<BaselineClassifier> fit_baseline(BaselineKind kind, const TabularDataset& train,
                                                 std::size_t knn_k = 5);

struct BaselineResult {
    std::string classifier;
    double real_maj_est;  // mean normal-probability on majority test rows
    double real_min_eva;  // mean normal-probability on minority test rows
    double fake_min_eva;  // mean normal-probability on generated samples
};

BaselineResult evaluate_baseline(const BaselineClassifier& clf, const Matrix& test_majority,
                                 const Matrix& test_minority, const Matrix& generated);

// Fraction of rows where round(normal-probability) matches the label.
double baseline_accuracy(const BaselineClassifier& clf, const TabularDataset& test);

} // namespace evagan
