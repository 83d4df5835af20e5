#include "pdct/pgm.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "pdct/error.hpp"

namespace pdct {

Image crop(const Image& u, const Roi& roi)
{
    if (roi.width == 0 || roi.height == 0 || roi.x + roi.width > u.width() || roi.y + roi.height > u.height()) {
        throw ShapeError("ROI does not fit inside the image");
    }
    Image out(roi.width, roi.height);
    for (std::size_t j = 0; j < roi.height; ++j) {
        for (std::size_t i = 0; i < roi.width; ++i) {
            out(i, j) = u(roi.x + i, roi.y + j);
        }
    }
    return out;
}

std::uint8_t window_level(double v, double lo, double hi)
{
    if (!(lo < hi)) {
        throw ParameterError("display window must satisfy lo < hi");
    }
    const double s = std::floor(255.0 * (v - lo) / (hi - lo) + 0.5);
    if (!(s > 0.0)) {
        return 0;
    }
    return s >= 255.0 ? 255 : static_cast<std::uint8_t>(s);
}

std::vector<std::uint8_t> pgm_raster(const Image& u, double lo, double hi)
{
    std::vector<std::uint8_t> out;
    out.reserve(u.size());
    for (std::size_t r = 0; r < u.height(); ++r) {
        const std::size_t j = u.height() - 1 - r;
        for (std::size_t i = 0; i < u.width(); ++i) {
            out.push_back(window_level(u(i, j), lo, hi));
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_pgm(const Image& u, double lo, double hi)
{
    const std::string header = "P5\n" + std::to_string(u.width()) + " " + std::to_string(u.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    const auto raster = pgm_raster(u, lo, hi);
    out.insert(out.end(), raster.begin(), raster.end());
    return out;
}

void write_pgm(const std::filesystem::path& path, const Image& u, double lo, double hi, const std::optional<Roi>& roi)
{
    const auto bytes = roi ? encode_pgm(crop(u, *roi), lo, hi) : encode_pgm(u, lo, hi);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

} // namespace pdct
