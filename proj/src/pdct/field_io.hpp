#pragma once

// Binary field files: a 16-byte header (magic "PDCT", u32 kind, u32 dim0,
// u32 dim1, all little-endian) followed by little-endian float64 values in
// row-major order. dim0 is the slow axis: image height, sinogram view count.
// A VectorField stores the full s component, then the full t component.

#include <filesystem>
#include <variant>

#include "pdct/spaces.hpp"

namespace pdct {

using AnyField = std::variant<Image, Sinogram, VectorField>;

FieldKind kind_of(const AnyField& f);

void write_field(const std::filesystem::path& path, const Image& f);
void write_field(const std::filesystem::path& path, const Sinogram& f);
void write_field(const std::filesystem::path& path, const VectorField& f);

AnyField read_field(const std::filesystem::path& path);
Image read_image(const std::filesystem::path& path);
Sinogram read_sinogram(const std::filesystem::path& path);

} // namespace pdct
