#include "pdct/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "pdct/error.hpp"

namespace pdct {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'D', 'C', 'T'};

void put_u32(std::ostream& os, std::uint32_t v)
{
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b)
{
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

std::uint32_t checked_dim(std::size_t d)
{
    if (d > 0xFFFFFFFFu) {
        throw ShapeError("field dimension does not fit in u32");
    }
    return static_cast<std::uint32_t>(d);
}

void write_raw(const std::filesystem::path& path, FieldKind kind, std::size_t dim0, std::size_t dim1,
               std::span<const double> values)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    os.write(kMagic.data(), kMagic.size());
    put_u32(os, static_cast<std::uint32_t>(kind));
    put_u32(os, checked_dim(dim0));
    put_u32(os, checked_dim(dim1));
    for (double v : values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) {
            b[k] = static_cast<unsigned char>(bits >> (8 * k));
        }
        os.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!os) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

} // namespace

FieldKind kind_of(const AnyField& f)
{
    return static_cast<FieldKind>(f.index() + 1);
}

void write_field(const std::filesystem::path& path, const Image& f)
{
    write_raw(path, FieldKind::Image, f.height(), f.width(), f.values());
}

void write_field(const std::filesystem::path& path, const Sinogram& f)
{
    write_raw(path, FieldKind::Sinogram, f.n_views(), f.n_bins(), f.values());
}

void write_field(const std::filesystem::path& path, const VectorField& f)
{
    write_raw(path, FieldKind::VectorField, f.height(), f.width(), f.values());
}

AnyField read_field(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    unsigned char header[16];
    if (!is.read(reinterpret_cast<char*>(header), 16)) {
        throw IoError("'" + path.string() + "': truncated header");
    }
    if (std::memcmp(header, kMagic.data(), 4) != 0) {
        throw IoError("'" + path.string() + "': bad magic");
    }
    const std::uint32_t kind = get_u32(header + 4);
    const std::size_t dim0 = get_u32(header + 8);
    const std::size_t dim1 = get_u32(header + 12);
    if (kind < 1 || kind > 3) {
        throw IoError("'" + path.string() + "': unknown field kind " + std::to_string(kind));
    }
    const std::size_t count = dim0 * dim1 * (kind == 3 ? 2 : 1);
    std::vector<double> values(count);
    for (double& v : values) {
        unsigned char b[8];
        if (!is.read(reinterpret_cast<char*>(b), 8)) {
            throw IoError("'" + path.string() + "': truncated payload");
        }
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) {
            bits |= std::uint64_t(b[k]) << (8 * k);
        }
        v = std::bit_cast<double>(bits);
    }
    switch (static_cast<FieldKind>(kind)) {
    case FieldKind::Image:
        return Image(dim1, dim0, std::move(values));
    case FieldKind::Sinogram:
        return Sinogram(dim0, dim1, std::move(values));
    case FieldKind::VectorField: {
        const std::size_t n = dim0 * dim1;
        Image s(dim1, dim0, std::vector<double>(values.begin(), values.begin() + n));
        Image t(dim1, dim0, std::vector<double>(values.begin() + n, values.end()));
        return VectorField(s, t);
    }
    }
    throw IoError("unreachable");
}

Image read_image(const std::filesystem::path& path)
{
    auto f = read_field(path);
    if (auto* img = std::get_if<Image>(&f)) {
        return std::move(*img);
    }
    throw IoError("'" + path.string() + "' does not hold an Image");
}

Sinogram read_sinogram(const std::filesystem::path& path)
{
    auto f = read_field(path);
    if (auto* s = std::get_if<Sinogram>(&f)) {
        return std::move(*s);
    }
    throw IoError("'" + path.string() + "' does not hold a Sinogram");
}

} // namespace pdct
