#include <algorithm>
#include <stdexcept>

#include "evagan/data.hpp"

namespace evagan {

TabularDataset synth_unbalanced(std::size_t n_majority, std::size_t n_minority, std::size_t d,
                                double separation, std::uint64_t seed) {
    if (n_majority < 1 || n_minority < 1)
        throw std::invalid_argument("synth_unbalanced: counts must be >= 1");
    if (d < 2) throw std::invalid_argument("synth_unbalanced: need d >= 2");

    const double maj_mean = 0.5 - separation / 2.0;
    const double min_mean = 0.5 + separation / 2.0;
    const double sigma = 0.08;

    Rng rng(seed);
    TabularDataset ds;
    ds.features = Matrix(n_majority + n_minority, d);
    ds.labels.resize(n_majority + n_minority);
    for (std::size_t i = 0; i < n_majority + n_minority; ++i) {
        const bool minority = i >= n_majority;
        const double mean = minority ? min_mean : maj_mean;
        ds.labels[i] = minority ? kMinorityLabel : kMajorityLabel;
        for (std::size_t c = 0; c < d; ++c)
            ds.features(i, c) = std::clamp(mean + sigma * rng.normal(), 0.0, 1.0);
    }
    for (std::size_t c = 0; c < d; ++c) ds.feature_names.push_back("f" + std::to_string(c));
    return ds;
}

} // namespace evagan
