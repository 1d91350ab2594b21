#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evagan/matrix.hpp"
#include "evagan/rng.hpp"

namespace evagan {

// Label polarity used everywhere: 0 = minority/bot, 1 = majority/normal.
inline constexpr int kMinorityLabel = 0;
inline constexpr int kMajorityLabel = 1;

struct PreprocessReport {
    std::vector<std::string> dropped_nan_inf_columns;
    std::vector<std::string> dropped_zero_std_columns;
    std::vector<std::pair<double, double>> clip_bounds;  // per retained column
    std::vector<double> scale_min;                       // per retained column
    std::vector<double> scale_max;
    std::string to_json() const;
};

struct TabularDataset {
    Matrix features;              // [n x d], values in [0,1]
    std::vector<int> labels;      // {0,1}
    std::vector<std::string> feature_names;
    PreprocessReport provenance;

    std::size_t size() const { return labels.size(); }
    std::size_t minority_count() const;
    std::size_t majority_count() const;
    std::vector<std::size_t> indices_of(int label) const;
    // Rows of `features` whose label matches.
    Matrix rows_of(int label) const;
};

// Raw parse result before preprocessing.
struct RawTable {
    std::vector<std::string> column_names;  // feature columns only
    Matrix values;                          // may contain NaN/Inf
    std::vector<int> labels;
};

// CSV: comma-separated, first row header, '.' decimal. Label column values
// equal to minority_value map to 0, everything else to 1.
RawTable load_tabular_csv(const std::string& path, const std::string& label_column,
                          const std::string& minority_value);

struct PreprocessOptions {
    double clip_low_pct = 1.0;    // percentile
    double clip_high_pct = 99.0;
    bool clip = true;
    bool drop_outlier_rows = false;  // alternative to clipping
};

// Clip -> drop NaN/Inf columns -> drop zero-std columns -> min-max scale.
TabularDataset preprocess(const RawTable& raw, const PreprocessOptions& opts = {});

struct SplitSpec {
    double train_fraction = 0.70;
    std::uint64_t seed = 0;
};

struct SplitResult {
    TabularDataset train;
    TabularDataset test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

// Stratified split; per-stratum train count by floor + largest remainder.
SplitResult split(const TabularDataset& ds, const SplitSpec& spec);

// Target train size for a stratum under the stated rounding rule.
std::size_t stratified_train_count(std::size_t stratum_size, double fraction);

struct MnistDataset {
    Matrix images;                 // [n x 784] in [0,1]
    std::vector<int> digit_labels; // original digits
    std::vector<int> binary_labels; // 0 for digit '0' (minority), 1 for digit '1'
};

// IDX pair loader (big-endian headers, magic 0x803 / 0x801). Keeps all digits;
// filter_binary_digits() reduces to the {'0','1'} subset.
MnistDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path);
MnistDataset filter_binary_digits(const MnistDataset& all);

// IDX writers, bit-exact with the loader's expectations.
void write_mnist_idx(const MnistDataset& ds, const std::string& images_path,
                     const std::string& labels_path);

MnistDataset undersample_minority(const MnistDataset& ds, double keep_fraction,
                                  std::uint64_t seed);
TabularDataset undersample_minority(const TabularDataset& ds, double keep_fraction,
                                    std::uint64_t seed);

// Flattened-image view of an MNIST dataset as a tabular dataset (shared
// training path; 784 features scaled to [0,1]).
TabularDataset as_tabular(const MnistDataset& ds);

// Two Gaussian clusters in [0,1]^d with mean separation `separation`.
// Majority centered at 0.5 - separation/2 per coordinate, minority at
// 0.5 + separation/2, sigma 0.08, clipped to [0,1].
TabularDataset synth_unbalanced(std::size_t n_majority, std::size_t n_minority, std::size_t d,
                                double separation, std::uint64_t seed);

} // namespace evagan
