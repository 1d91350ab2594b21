#include "evagan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evagan {
namespace {

// Logistic model on the bot indicator (1 when label == minority).
class LogisticRegression : public BaselineClassifier {
public:
    LogisticRegression(const TabularDataset& train, std::size_t iters, double lr)
        : w_(train.features.cols(), 0.0) {
        const std::size_t n = train.size();
        const std::size_t d = w_.size();
        std::vector<double> target(n);
        for (std::size_t i = 0; i < n; ++i)
            target[i] = train.labels[i] == kMinorityLabel ? 1.0 : 0.0;
        for (std::size_t it = 0; it < iters; ++it) {
            std::vector<double> gw(d, 0.0);
            double gb = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double p = prob(train.features.row(i));
                const double err = (p - target[i]) / static_cast<double>(n);
                for (std::size_t c = 0; c < d; ++c) gw[c] += err * train.features(i, c);
                gb += err;
            }
            for (std::size_t c = 0; c < d; ++c) w_[c] -= lr * gw[c];
            b_ -= lr * gb;
        }
    }

    std::vector<double> predict(const Matrix& x) const override {
        std::vector<double> out(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) out[i] = prob(x.row(i));
        return out;
    }

    std::string name() const override { return "lr"; }

private:
    double prob(const double* row) const {
        double z = b_;
        for (std::size_t c = 0; c < w_.size(); ++c) z += w_[c] * row[c];
        return 1.0 / (1.0 + std::exp(-z));
    }

    std::vector<double> w_;
    double b_ = 0.0;
};

class KnnClassifier : public BaselineClassifier {
public:
    KnnClassifier(const TabularDataset& train, std::size_t k) : train_(train), k_(k) {
        if (k_ == 0) throw std::invalid_argument("knn: k must be >= 1");
        if (k_ > train.size())
            throw std::invalid_argument("knn: k=" + std::to_string(k_) + " exceeds train size " +
                                        std::to_string(train.size()));
    }

    std::vector<double> predict(const Matrix& x) const override {
        std::vector<double> out(x.rows());
        const std::size_t n = train_.size();
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double d2 = 0.0;
                const double* a = x.row(i);
                const double* b = train_.features.row(j);
                for (std::size_t c = 0; c < x.cols(); ++c) {
                    const double d = a[c] - b[c];
                    d2 += d * d;
                }
                dist[j] = {d2, j};
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k_), dist.end());
            std::size_t bots = 0;
            for (std::size_t j = 0; j < k_; ++j)
                if (train_.labels[dist[j].second] == kMinorityLabel) ++bots;
            out[i] = static_cast<double>(bots) / static_cast<double>(k_);
        }
        return out;
    }

    std::string name() const override { return "knn"; }

private:
    TabularDataset train_;
    std::size_t k_;
};

class GaussianNb : public BaselineClassifier {
public:
    explicit GaussianNb(const TabularDataset& train) {
        const std::size_t d = train.features.cols();
        for (int label : {kMinorityLabel, kMajorityLabel}) {
            auto idx = train.indices_of(label);
            if (idx.empty()) throw std::invalid_argument("nb: a class is missing from train set");
            ClassModel m;
            m.prior = static_cast<double>(idx.size()) / static_cast<double>(train.size());
            m.mean.assign(d, 0.0);
            m.var.assign(d, 0.0);
            for (std::size_t i : idx)
                for (std::size_t c = 0; c < d; ++c) m.mean[c] += train.features(i, c);
            for (std::size_t c = 0; c < d; ++c) m.mean[c] /= static_cast<double>(idx.size());
            for (std::size_t i : idx)
                for (std::size_t c = 0; c < d; ++c) {
                    const double diff = train.features(i, c) - m.mean[c];
                    m.var[c] += diff * diff;
                }
            for (std::size_t c = 0; c < d; ++c)
                m.var[c] = m.var[c] / static_cast<double>(idx.size()) + 1e-9;
            (label == kMinorityLabel ? bot_ : normal_) = std::move(m);
        }
    }

    std::vector<double> predict(const Matrix& x) const override {
        std::vector<double> out(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double lb = log_joint(bot_, x.row(i), x.cols());
            const double ln = log_joint(normal_, x.row(i), x.cols());
            const double m = std::max(lb, ln);
            const double eb = std::exp(lb - m);
            const double en = std::exp(ln - m);
            out[i] = eb / (eb + en);
        }
        return out;
    }

    std::string name() const override { return "nb"; }

private:
    struct ClassModel {
        double prior = 0.0;
        std::vector<double> mean;
        std::vector<double> var;
    };

    static double log_joint(const ClassModel& m, const double* row, std::size_t d) {
        double lj = std::log(m.prior);
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = row[c] - m.mean[c];
            lj += -0.5 * std::log(2.0 * 3.14159265358979323846 * m.var[c]) -
                  diff * diff / (2.0 * m.var[c]);
        }
        return lj;
    }

    ClassModel bot_;
    ClassModel normal_;
};

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

BaselineKind baseline_from_string(const std::string& s) {
    if (s == "lr") return BaselineKind::lr;
    if (s == "knn") return BaselineKind::knn;
    if (s == "nb") return BaselineKind::nb;
    throw std::invalid_argument("unknown baseline: " + s);
}

std::unique_ptr<BaselineClassifier> fit_baseline(BaselineKind kind, const TabularDataset& train,
                                                 std::size_t knn_k) {
    if (train.size() == 0) throw std::invalid_argument("fit_baseline: empty train set");
    if (train.minority_count() == 0 || train.majority_count() == 0)
        throw std::invalid_argument("fit_baseline: both classes must be present");
    switch (kind) {
        case BaselineKind::lr:
            return std::make_unique<LogisticRegression>(train, 500, 0.1);
        case BaselineKind::knn:
            return std::make_unique<KnnClassifier>(train, knn_k);
        case BaselineKind::nb:
            return std::make_unique<GaussianNb>(train);
    }
    throw std::logic_error("fit_baseline: unreachable");
}

BaselineResult evaluate_baseline(const BaselineClassifier& clf, const Matrix& test_majority,
                                 const Matrix& test_minority, const Matrix& generated) {
    auto normal_mean = [&clf](const Matrix& m) {
        auto bot = clf.predict(m);
        for (auto& p : bot) p = 1.0 - p;
        return mean_of(bot);
    };
    return {clf.name(), normal_mean(test_majority), normal_mean(test_minority),
            normal_mean(generated)};
}

double baseline_accuracy(const BaselineClassifier& clf, const TabularDataset& test) {
    const auto bot = clf.predict(test.features);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < bot.size(); ++i) {
        const int pred = bot[i] >= 0.5 ? kMinorityLabel : kMajorityLabel;
        if (pred == test.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(bot.size());
}

} // namespace evagan
