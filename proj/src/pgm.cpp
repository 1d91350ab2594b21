#include "evagan/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace evagan {

void write_pgm(const Matrix& image, const std::string& path) {
    if (image.empty()) throw std::invalid_argument("write_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot write " + path);
    out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
    for (double v : image.vec()) {
        const double scaled = std::clamp(v, 0.0, 1.0) * 255.0;
        const auto byte = static_cast<unsigned char>(std::lround(scaled));
        out.write(reinterpret_cast<const char*>(&byte), 1);
    }
}

Matrix tile_grid(const Matrix& flat_images, std::size_t n_rows, std::size_t n_cols,
                 std::size_t side) {
    if (flat_images.rows() < n_rows * n_cols)
        throw std::invalid_argument("tile_grid: need " + std::to_string(n_rows * n_cols) +
                                    " images, got " + std::to_string(flat_images.rows()));
    if (flat_images.cols() != side * side)
        throw std::invalid_argument("tile_grid: image width " +
                                    std::to_string(flat_images.cols()) + " != side^2");
    Matrix grid(n_rows * side, n_cols * side);
    for (std::size_t t = 0; t < n_rows * n_cols; ++t) {
        const std::size_t gr = (t / n_cols) * side;
        const std::size_t gc = (t % n_cols) * side;
        for (std::size_t r = 0; r < side; ++r)
            for (std::size_t c = 0; c < side; ++c)
                grid(gr + r, gc + c) = flat_images(t, r * side + c);
    }
    return grid;
}

} // namespace evagan
