#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "rydgan/kernels.hpp"

namespace rydgan {

/// Binary PGM (P5): pixels clamped to [0, 1], scaled by 255, rounded.
std::string encode_pgm(std::span<const double> pixels, int width, int height);

void write_pgm(const std::filesystem::path& path, std::span<const double> pixels, int width = 28, int height = 28);

/// Tiles each row of `images` (side x side) into a grid `columns` wide with
/// a 1-pixel black gutter.
void write_montage(const std::filesystem::path& path, const RowMatrix& images, int columns, int side = 28);

}  // namespace rydgan
