#pragma once

// 8-bit greyscale PGM (binary P5) export with a linear display window.
// Values map as round(255 (v - lo) / (hi - lo)), clamped to [0, 255]. The
// first PGM row is the top of the image, i.e. the largest t index.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "pdct/spaces.hpp"

namespace pdct {

// Pixel rectangle: columns [x, x + width), rows [y, y + height).
struct Roi {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t width = 0;
    std::size_t height = 0;
};

Image crop(const Image& u, const Roi& roi);

std::uint8_t window_level(double v, double lo, double hi);

// Raster bytes in PGM row order.
std::vector<std::uint8_t> pgm_raster(const Image& u, double lo, double hi);

// Complete P5 file contents.
std::vector<std::uint8_t> encode_pgm(const Image& u, double lo, double hi);

void write_pgm(const std::filesystem::path& path, const Image& u, double lo, double hi,
               const std::optional<Roi>& roi = std::nullopt);

} // namespace pdct
