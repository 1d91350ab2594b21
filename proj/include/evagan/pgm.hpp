#pragma once

#include <string>

#include "evagan/matrix.hpp"

namespace evagan {

// Binary portable graymap (P5), maxval 255.
void write_pgm(const Matrix& image, const std::string& path);

// Tiles n_rows x n_cols images (each side x side pixels, values in [0,1],
// one flattened image per input row) into a single graymap.
Matrix tile_grid(const Matrix& flat_images, std::size_t n_rows, std::size_t n_cols,
                 std::size_t side);

} // namespace evagan
