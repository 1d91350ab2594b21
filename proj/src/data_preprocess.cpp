#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "evagan/data.hpp"

#include "json.hpp"

namespace evagan {

std::size_t TabularDataset::minority_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kMinorityLabel));
}

std::size_t TabularDataset::majority_count() const {
    return labels.size() - minority_count();
}

std::vector<std::size_t> TabularDataset::indices_of(int label) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) out.push_back(i);
    return out;
}

Matrix TabularDataset::rows_of(int label) const {
    const auto idx = indices_of(label);
    Matrix out(idx.size(), features.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t c = 0; c < features.cols(); ++c) out(i, c) = features(idx[i], c);
    }
    return out;
}

std::string PreprocessReport::to_json() const {
    nlohmann::ordered_json j;
    j["dropped_nan_inf_columns"] = dropped_nan_inf_columns;
    j["dropped_zero_std_columns"] = dropped_zero_std_columns;
    nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
    for (const auto& [lo, hi] : clip_bounds) bounds.push_back({lo, hi});
    j["clip_bounds"] = bounds;
    j["scale_min"] = scale_min;
    j["scale_max"] = scale_max;
    return j.dump(2);
}

namespace {

double percentile(std::vector<double> sorted, double pct) {
    // `sorted` must be ascending; linear interpolation between ranks.
    const double rank = pct / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

TabularDataset preprocess(const RawTable& raw, const PreprocessOptions& opts) {
    const std::size_t n = raw.labels.size();
    const std::size_t d = raw.column_names.size();
    if (n < 2) throw std::invalid_argument("preprocess: need >= 2 rows");

    Matrix work = raw.values;
    std::vector<bool> keep_row(n, true);
    PreprocessReport report;
    std::vector<std::size_t> retained;

    // Per-column clip bounds from finite values only.
    std::vector<std::pair<double, double>> bounds(d, {0.0, 0.0});
    if (opts.clip || opts.drop_outlier_rows) {
        for (std::size_t c = 0; c < d; ++c) {
            std::vector<double> col;
            col.reserve(n);
            for (std::size_t r = 0; r < n; ++r)
                if (std::isfinite(work(r, c))) col.push_back(work(r, c));
            if (col.empty()) continue;
            std::sort(col.begin(), col.end());
            bounds[c] = {percentile(col, opts.clip_low_pct), percentile(col, opts.clip_high_pct)};
            if (opts.drop_outlier_rows) {
                for (std::size_t r = 0; r < n; ++r) {
                    const double v = work(r, c);
                    if (std::isfinite(v) && (v < bounds[c].first || v > bounds[c].second))
                        keep_row[r] = false;
                }
            } else {
                for (std::size_t r = 0; r < n; ++r) {
                    if (!std::isfinite(work(r, c))) continue;
                    work(r, c) = std::clamp(work(r, c), bounds[c].first, bounds[c].second);
                }
            }
        }
    }

    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r)
        if (keep_row[r]) rows.push_back(r);
    if (rows.size() < 2) throw std::invalid_argument("preprocess: outlier removal left < 2 rows");

    // Column triage: NaN/Inf first, then zero standard deviation.
    for (std::size_t c = 0; c < d; ++c) {
        bool finite = true;
        for (std::size_t r : rows)
            if (!std::isfinite(work(r, c))) { finite = false; break; }
        if (!finite) {
            report.dropped_nan_inf_columns.push_back(raw.column_names[c]);
            continue;
        }
        const double first = work(rows[0], c);
        bool constant = true;
        for (std::size_t r : rows)
            if (work(r, c) != first) { constant = false; break; }
        if (constant) {
            report.dropped_zero_std_columns.push_back(raw.column_names[c]);
            continue;
        }
        retained.push_back(c);
    }
    if (retained.empty()) throw std::invalid_argument("preprocess: all columns dropped");

    TabularDataset ds;
    ds.features = Matrix(rows.size(), retained.size());
    for (std::size_t i = 0; i < retained.size(); ++i) {
        const std::size_t c = retained[i];
        double lo = work(rows[0], c), hi = lo;
        for (std::size_t r : rows) {
            lo = std::min(lo, work(r, c));
            hi = std::max(hi, work(r, c));
        }
        for (std::size_t k = 0; k < rows.size(); ++k)
            ds.features(k, i) = (work(rows[k], c) - lo) / (hi - lo);
        ds.feature_names.push_back(raw.column_names[c]);
        report.clip_bounds.push_back(bounds[c]);
        report.scale_min.push_back(lo);
        report.scale_max.push_back(hi);
    }
    for (std::size_t r : rows) ds.labels.push_back(raw.labels[r]);
    ds.provenance = std::move(report);
    return ds;
}

std::size_t stratified_train_count(std::size_t stratum_size, double fraction) {
    return static_cast<std::size_t>(
        std::floor(static_cast<double>(stratum_size) * fraction + 0.5));
}

SplitResult split(const TabularDataset& ds, const SplitSpec& spec) {
    const auto min_idx = ds.indices_of(kMinorityLabel);
    const auto maj_idx = ds.indices_of(kMajorityLabel);
    if (min_idx.size() < 2 || maj_idx.size() < 2)
        throw std::invalid_argument("split: each class needs >= 2 samples");

    // Floor + largest remainder across the two strata so the total matches
    // round(n * fraction).
    const double f = spec.train_fraction;
    const std::size_t total_train = stratified_train_count(ds.size(), f);
    const double exact_maj = static_cast<double>(maj_idx.size()) * f;
    const double exact_min = static_cast<double>(min_idx.size()) * f;
    std::size_t train_maj = static_cast<std::size_t>(std::floor(exact_maj));
    std::size_t train_min = static_cast<std::size_t>(std::floor(exact_min));
    while (train_maj + train_min < total_train) {
        const double rem_maj = exact_maj - static_cast<double>(train_maj);
        const double rem_min = exact_min - static_cast<double>(train_min);
        if (rem_maj >= rem_min) ++train_maj; else ++train_min;
    }
    train_maj = std::min(train_maj, maj_idx.size() - 1);
    train_min = std::min(train_min, min_idx.size() - 1);
    train_maj = std::max<std::size_t>(train_maj, 1);
    train_min = std::max<std::size_t>(train_min, 1);

    Rng rng(spec.seed);
    auto shuffle = [&rng](std::vector<std::size_t> v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.uniform_index(i)]);
        return v;
    };
    const auto maj_sh = shuffle(maj_idx);
    const auto min_sh = shuffle(min_idx);

    SplitResult out;
    out.train_indices.assign(maj_sh.begin(), maj_sh.begin() + static_cast<long>(train_maj));
    out.train_indices.insert(out.train_indices.end(), min_sh.begin(),
                             min_sh.begin() + static_cast<long>(train_min));
    out.test_indices.assign(maj_sh.begin() + static_cast<long>(train_maj), maj_sh.end());
    out.test_indices.insert(out.test_indices.end(), min_sh.begin() + static_cast<long>(train_min),
                            min_sh.end());

    auto take = [&ds](const std::vector<std::size_t>& idx) {
        TabularDataset part;
        part.features = Matrix(idx.size(), ds.features.cols());
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t c = 0; c < ds.features.cols(); ++c)
                part.features(i, c) = ds.features(idx[i], c);
        for (std::size_t i : idx) part.labels.push_back(ds.labels[i]);
        part.feature_names = ds.feature_names;
        part.provenance = ds.provenance;
        return part;
    };
    out.train = take(out.train_indices);
    out.test = take(out.test_indices);
    return out;
}

TabularDataset undersample_minority(const TabularDataset& ds, double keep_fraction,
                                    std::uint64_t seed) {
    if (keep_fraction <= 0.0 || keep_fraction > 1.0)
        throw std::invalid_argument("undersample_minority: keep_fraction must be in (0,1]");
    if (keep_fraction == 1.0) return ds;
    const auto min_idx = ds.indices_of(kMinorityLabel);
    if (min_idx.empty()) throw std::invalid_argument("undersample_minority: no minority rows");
    const auto keep = static_cast<std::size_t>(
        std::ceil(keep_fraction * static_cast<double>(min_idx.size())));
    if (keep == 0) throw std::invalid_argument("undersample_minority: nothing would remain");

    Rng rng(seed);
    std::vector<std::size_t> pool = min_idx;
    for (std::size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[rng.uniform_index(i)]);
    pool.resize(keep);
    std::sort(pool.begin(), pool.end());

    std::vector<std::size_t> kept;
    std::size_t p = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.labels[i] == kMinorityLabel) {
            if (p < pool.size() && pool[p] == i) {
                kept.push_back(i);
                ++p;
            }
        } else {
            kept.push_back(i);
        }
    }

    TabularDataset out;
    out.features = Matrix(kept.size(), ds.features.cols());
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t c = 0; c < ds.features.cols(); ++c)
            out.features(i, c) = ds.features(kept[i], c);
    for (std::size_t i : kept) out.labels.push_back(ds.labels[i]);
    out.feature_names = ds.feature_names;
    out.provenance = ds.provenance;
    return out;
}

} // namespace evagan
