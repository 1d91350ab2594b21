#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "evagan/data.hpp"

namespace evagan {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;
constexpr std::size_t kImageSide = 28;
constexpr std::size_t kImagePixels = kImageSide * kImageSide;

std::uint32_t read_be32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("load_mnist_idx: truncated header in " + path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

void write_be32(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

} // namespace

MnistDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw std::runtime_error("load_mnist_idx: cannot open " + images_path);
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw std::runtime_error("load_mnist_idx: cannot open " + labels_path);

    const std::uint32_t img_magic = read_be32(img, images_path);
    if (img_magic != kImageMagic)
        throw std::runtime_error("load_mnist_idx: bad image magic in " + images_path);
    const std::uint32_t n_images = read_be32(img, images_path);
    const std::uint32_t rows = read_be32(img, images_path);
    const std::uint32_t cols = read_be32(img, images_path);
    if (rows != kImageSide || cols != kImageSide)
        throw std::runtime_error("load_mnist_idx: expected 28x28 images in " + images_path);

    const std::uint32_t lab_magic = read_be32(lab, labels_path);
    if (lab_magic != kLabelMagic)
        throw std::runtime_error("load_mnist_idx: bad label magic in " + labels_path);
    const std::uint32_t n_labels = read_be32(lab, labels_path);
    if (n_labels != n_images)
        throw std::runtime_error("load_mnist_idx: label count " + std::to_string(n_labels) +
                                 " != image count " + std::to_string(n_images));

    std::vector<unsigned char> pixels(static_cast<std::size_t>(n_images) * kImagePixels);
    img.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (img.gcount() != static_cast<std::streamsize>(pixels.size()))
        throw std::runtime_error("load_mnist_idx: truncated image data in " + images_path);
    std::vector<unsigned char> digits(n_images);
    lab.read(reinterpret_cast<char*>(digits.data()), static_cast<std::streamsize>(digits.size()));
    if (lab.gcount() != static_cast<std::streamsize>(digits.size()))
        throw std::runtime_error("load_mnist_idx: truncated label data in " + labels_path);

    MnistDataset ds;
    ds.images = Matrix(n_images, kImagePixels);
    for (std::size_t i = 0; i < pixels.size(); ++i)
        ds.images.vec()[i] = static_cast<double>(pixels[i]) / 255.0;
    ds.digit_labels.assign(digits.begin(), digits.end());
    ds.binary_labels.resize(n_images);
    for (std::size_t i = 0; i < n_images; ++i)
        ds.binary_labels[i] = ds.digit_labels[i] == 0 ? kMinorityLabel : kMajorityLabel;
    return ds;
}

MnistDataset filter_binary_digits(const MnistDataset& all) {
    MnistDataset out;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < all.digit_labels.size(); ++i)
        if (all.digit_labels[i] == 0 || all.digit_labels[i] == 1) keep.push_back(i);
    out.images = Matrix(keep.size(), all.images.cols());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t c = 0; c < all.images.cols(); ++c)
            out.images(i, c) = all.images(keep[i], c);
    for (std::size_t i : keep) {
        out.digit_labels.push_back(all.digit_labels[i]);
        out.binary_labels.push_back(all.digit_labels[i] == 0 ? kMinorityLabel : kMajorityLabel);
    }
    return out;
}

void write_mnist_idx(const MnistDataset& ds, const std::string& images_path,
                     const std::string& labels_path) {
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw std::runtime_error("write_mnist_idx: cannot open " + images_path);
    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw std::runtime_error("write_mnist_idx: cannot open " + labels_path);

    const auto n = static_cast<std::uint32_t>(ds.digit_labels.size());
    write_be32(img, kImageMagic);
    write_be32(img, n);
    write_be32(img, kImageSide);
    write_be32(img, kImageSide);
    for (double v : ds.images.vec()) {
        const double scaled = std::clamp(v, 0.0, 1.0) * 255.0;
        const auto byte = static_cast<unsigned char>(std::lround(scaled));
        img.write(reinterpret_cast<const char*>(&byte), 1);
    }
    write_be32(lab, kLabelMagic);
    write_be32(lab, n);
    for (int d : ds.digit_labels) {
        const auto byte = static_cast<unsigned char>(d);
        lab.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

MnistDataset undersample_minority(const MnistDataset& ds, double keep_fraction,
                                  std::uint64_t seed) {
    if (keep_fraction <= 0.0 || keep_fraction > 1.0)
        throw std::invalid_argument("undersample_minority: keep_fraction must be in (0,1]");
    if (keep_fraction == 1.0) return ds;
    std::vector<std::size_t> min_idx;
    for (std::size_t i = 0; i < ds.binary_labels.size(); ++i)
        if (ds.binary_labels[i] == kMinorityLabel) min_idx.push_back(i);
    if (min_idx.empty()) throw std::invalid_argument("undersample_minority: no minority images");
    const auto keep_n = static_cast<std::size_t>(
        std::ceil(keep_fraction * static_cast<double>(min_idx.size())));

    Rng rng(seed);
    for (std::size_t i = min_idx.size(); i > 1; --i)
        std::swap(min_idx[i - 1], min_idx[rng.uniform_index(i)]);
    min_idx.resize(keep_n);
    std::sort(min_idx.begin(), min_idx.end());

    std::vector<std::size_t> kept;
    std::size_t p = 0;
    for (std::size_t i = 0; i < ds.binary_labels.size(); ++i) {
        if (ds.binary_labels[i] == kMinorityLabel) {
            if (p < min_idx.size() && min_idx[p] == i) {
                kept.push_back(i);
                ++p;
            }
        } else {
            kept.push_back(i);
        }
    }

    MnistDataset out;
    out.images = Matrix(kept.size(), ds.images.cols());
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t c = 0; c < ds.images.cols(); ++c)
            out.images(i, c) = ds.images(kept[i], c);
    for (std::size_t i : kept) {
        out.digit_labels.push_back(ds.digit_labels[i]);
        out.binary_labels.push_back(ds.binary_labels[i]);
    }
    return out;
}

TabularDataset as_tabular(const MnistDataset& ds) {
    TabularDataset out;
    out.features = ds.images;
    out.labels = ds.binary_labels;
    out.feature_names.reserve(ds.images.cols());
    for (std::size_t i = 0; i < ds.images.cols(); ++i)
        out.feature_names.push_back("px" + std::to_string(i));
    return out;
}

} // namespace evagan
