#include "evagan/metrics.hpp"

#include <stdexcept>

namespace evagan {
namespace {

double column_mean(const Matrix& m) {
    double sum = 0.0;
    for (double v : m.vec()) sum += v;
    return sum / static_cast<double>(m.size());
}

} // namespace

double gen_validity(EvaganModel& model, std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("gen_validity: n must be >= 1");
    const Matrix fake = model.generate(n, rng, Mode::infer);
    return column_mean(model.discriminator().forward(fake, Mode::infer)[kHeadSource]);
}

double fake_min_eva(EvaganModel& model, std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("fake_min_eva: n must be >= 1");
    const Matrix fake = model.generate(n, rng, Mode::infer);
    return column_mean(model.discriminator().forward(fake, Mode::infer)[kHeadMinority]);
}

double real_maj_est(EvaganModel& model, const Matrix& test_majority) {
    if (test_majority.rows() == 0) throw std::invalid_argument("real_maj_est: empty test slice");
    return column_mean(model.discriminator().forward(test_majority, Mode::infer)[kHeadMajority]);
}

double real_min_eva(EvaganModel& model, const Matrix& test_minority) {
    if (test_minority.rows() == 0) throw std::invalid_argument("real_min_eva: empty test slice");
    return column_mean(model.discriminator().forward(test_minority, Mode::infer)[kHeadMinority]);
}

EpochMetrics evagan_metrics(EvaganModel& model, const Matrix& test_majority,
                            const Matrix& test_minority, std::size_t n, Rng& rng) {
    EpochMetrics m;
    // One generated batch serves both generator-side estimations.
    if (n == 0) throw std::invalid_argument("evagan_metrics: n must be >= 1");
    const Matrix fake = model.generate(n, rng, Mode::infer);
    auto heads = model.discriminator().forward(fake, Mode::infer);
    m.gen_validity = column_mean(heads[kHeadSource]);
    m.fake_min_eva = column_mean(heads[kHeadMinority]);
    m.real_maj_est = real_maj_est(model, test_majority);
    m.real_min_eva = real_min_eva(model, test_minority);
    return m;
}

EpochMetrics acgan_metrics(AcganModel& model, const Matrix& test_majority,
                           const Matrix& test_minority, std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("acgan_metrics: n must be >= 1");
    if (test_majority.rows() == 0 || test_minority.rows() == 0)
        throw std::invalid_argument("acgan_metrics: empty test slice");
    EpochMetrics m;
    const std::vector<int> minority_labels(n, kMinorityLabel);
    const Matrix fake = model.generate(n, minority_labels, rng, Mode::infer);
    auto fake_heads = model.discriminator().forward(fake, Mode::infer);
    m.gen_validity = column_mean(fake_heads[kAcganHeadSource]);
    m.fake_min_eva = column_mean(fake_heads[kAcganHeadClass]);
    m.real_maj_est =
        column_mean(model.discriminator().forward(test_majority, Mode::infer)[kAcganHeadClass]);
    m.real_min_eva =
        column_mean(model.discriminator().forward(test_minority, Mode::infer)[kAcganHeadClass]);
    return m;
}

} // namespace evagan
