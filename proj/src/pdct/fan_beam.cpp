#include "pdct/fan_beam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pdct/error.hpp"

namespace pdct {

void FanBeamGeometry::validate() const
{
    if (!(source_radius > 0.0) || !(source_detector_distance > 0.0)) {
        throw ParameterError("source radius and source-detector distance must be positive");
    }
    if (angles.empty()) {
        throw ParameterError("geometry needs at least one view");
    }
    for (std::size_t k = 1; k < angles.size(); ++k) {
        if (!(angles[k] > angles[k - 1])) {
            throw ParameterError("view angles must be strictly increasing");
        }
    }
    if (angles.back() - angles.front() >= 2.0 * std::numbers::pi) {
        throw ParameterError("view angles must lie within one full turn");
    }
    if (n_bins == 0 || !(bin_size > 0.0)) {
        throw ParameterError("detector needs a positive bin count and bin size");
    }
    if (image_size == 0 || !(image_side > 0.0)) {
        throw ParameterError("pixel size must be positive");
    }
    if (image_size > 46340) {
        throw ParameterError("image too large for 32-bit pixel indices");
    }
}

std::vector<double> FanBeamGeometry::full_scan_angles(std::size_t n_views)
{
    std::vector<double> a(n_views);
    for (std::size_t k = 0; k < n_views; ++k) {
        a[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_views);
    }
    return a;
}

double FanBeamGeometry::inscribed_image_side(double source_radius, double source_detector_distance,
                                             std::size_t n_bins, double bin_size)
{
    const double half_width = 0.5 * static_cast<double>(n_bins) * bin_size;
    const double half_angle = std::atan(half_width / source_detector_distance);
    return 2.0 * source_radius * std::sin(half_angle);
}

FanBeamGeometry FanBeamGeometry::circular(std::size_t image_size, double image_side, std::size_t n_views,
                                          std::size_t n_bins, double bin_size, double source_radius,
                                          double source_detector_distance)
{
    FanBeamGeometry g;
    g.source_radius = source_radius;
    g.source_detector_distance = source_detector_distance;
    g.angles = full_scan_angles(n_views);
    g.n_bins = n_bins;
    g.bin_size = bin_size;
    g.image_side = image_side;
    g.image_size = image_size;
    g.validate();
    return g;
}

namespace {

// Index of the pixel whose half-open interval (k, k+1] contains coordinate
// c (in pixel units). Points exactly on an edge fall to the lower index.
long cell_index(double c)
{
    return static_cast<long>(std::ceil(c)) - 1;
}

} // namespace

std::vector<RayHit> trace_ray(const GridSpec& grid, Point2 a, Point2 b)
{
    std::vector<RayHit> hits;
    const auto m = static_cast<long>(grid.m);
    if (m == 0 || !(grid.side > 0.0)) {
        return hits;
    }
    const double lo = -0.5 * grid.side;
    const double hi = 0.5 * grid.side;
    const double d = grid.side / static_cast<double>(grid.m);
    const double ds = b.s - a.s;
    const double dt = b.t - a.t;
    const double len = std::hypot(ds, dt);
    if (len == 0.0) {
        return hits;
    }

    // clip the segment parameter range [0, 1] against the grid box
    double amin = 0.0;
    double amax = 1.0;
    auto clip = [&](double start, double delta) {
        if (delta == 0.0) {
            return start >= lo && start <= hi;
        }
        double a1 = (lo - start) / delta;
        double a2 = (hi - start) / delta;
        if (a1 > a2) {
            std::swap(a1, a2);
        }
        amin = std::max(amin, a1);
        amax = std::min(amax, a2);
        return true;
    };
    if (!clip(a.s, ds) || !clip(a.t, dt) || !(amin < amax)) {
        return hits;
    }

    std::vector<double> alphas;
    alphas.reserve(2 * grid.m + 4);
    alphas.push_back(amin);
    alphas.push_back(amax);
    auto crossings = [&](double start, double delta) {
        if (delta == 0.0) {
            return;
        }
        for (long k = 0; k <= m; ++k) {
            const double alpha = (lo + static_cast<double>(k) * d - start) / delta;
            if (alpha > amin && alpha < amax) {
                alphas.push_back(alpha);
            }
        }
    };
    crossings(a.s, ds);
    crossings(a.t, dt);
    std::sort(alphas.begin(), alphas.end());

    for (std::size_t k = 0; k + 1 < alphas.size(); ++k) {
        const double a0 = alphas[k];
        const double a1 = alphas[k + 1];
        if (!(a1 > a0)) {
            continue;
        }
        const double mid = 0.5 * (a0 + a1);
        const long i = cell_index((a.s + mid * ds - lo) / d);
        const long j = cell_index((a.t + mid * dt - lo) / d);
        if (i < 0 || i >= m || j < 0 || j >= m) {
            continue;
        }
        const auto pixel = static_cast<std::uint32_t>(j * m + i);
        const double chord = (a1 - a0) * len;
        if (!hits.empty() && hits.back().pixel == pixel) {
            hits.back().length += chord;
        } else {
            hits.push_back({pixel, chord});
        }
    }
    return hits;
}

FanBeamProjector::FanBeamProjector(FanBeamGeometry geometry) : geom_(std::move(geometry))
{
    geom_.validate();
    const std::size_t n_rows = range_size();
    const std::size_t n_pix = domain_size();
    const GridSpec grid{geom_.image_size, geom_.image_side};

    row_start_.reserve(n_rows + 1);
    row_start_.push_back(0);
    for (std::size_t v = 0; v < geom_.n_views(); ++v) {
        const Point2 src = source(v);
        for (std::size_t b = 0; b < geom_.n_bins; ++b) {
            auto hits = trace_ray(grid, src, bin_center(v, b));
            // a pixel can show up twice only through degenerate zero-length
            // splits; keep the first occurrence and fold the rest into it
            std::sort(hits.begin(), hits.end(), [](const RayHit& x, const RayHit& y) { return x.pixel < y.pixel; });
            for (std::size_t k = 0; k < hits.size(); ++k) {
                if (k > 0 && hits[k].pixel == pixel_.back()) {
                    values_.back() += hits[k].length;
                    continue;
                }
                pixel_.push_back(hits[k].pixel);
                values_.push_back(hits[k].length);
            }
            row_start_.push_back(values_.size());
        }
    }

    // transpose by counting sort; rows stay ascending within each column
    col_start_.assign(n_pix + 1, 0);
    for (auto p : pixel_) {
        ++col_start_[p + 1];
    }
    for (std::size_t c = 0; c < n_pix; ++c) {
        col_start_[c + 1] += col_start_[c];
    }
    col_row_.resize(values_.size());
    col_values_.resize(values_.size());
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            const std::size_t dst = fill[pixel_[k]]++;
            col_row_[dst] = static_cast<std::uint32_t>(r);
            col_values_[dst] = values_[k];
        }
    }
}

Point2 FanBeamProjector::source(std::size_t view) const
{
    const double b = geom_.angles.at(view);
    return {geom_.source_radius * std::cos(b), geom_.source_radius * std::sin(b)};
}

Point2 FanBeamProjector::bin_center(std::size_t view, std::size_t bin) const
{
    const double b = geom_.angles.at(view);
    const double c = std::cos(b);
    const double s = std::sin(b);
    const double det = geom_.source_radius - geom_.source_detector_distance;
    const double offset = (static_cast<double>(bin) - 0.5 * static_cast<double>(geom_.n_bins - 1)) * geom_.bin_size;
    return {det * c - offset * s, det * s + offset * c};
}

void FanBeamProjector::apply(std::span<const double> x, std::span<double> y) const
{
    check_apply(x, y);
    const std::size_t n_rows = y.size();
    for (std::size_t r = 0; r < n_rows; ++r) {
        double sum = 0.0;
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            sum += values_[k] * x[pixel_[k]];
        }
        y[r] = sum;
    }
}

void FanBeamProjector::apply_transpose(std::span<const double> y, std::span<double> x) const
{
    check_transpose(y, x);
    const std::size_t n_pix = x.size();
    for (std::size_t c = 0; c < n_pix; ++c) {
        double sum = 0.0;
        for (std::size_t k = col_start_[c]; k < col_start_[c + 1]; ++k) {
            sum += col_values_[k] * y[col_row_[k]];
        }
        x[c] = sum;
    }
}

std::vector<double> FanBeamProjector::abs_row_sums() const
{
    std::vector<double> s(range_size(), 0.0);
    for (std::size_t r = 0; r < s.size(); ++r) {
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            s[r] += std::abs(values_[k]);
        }
    }
    return s;
}

std::vector<double> FanBeamProjector::abs_col_sums() const
{
    std::vector<double> s(domain_size(), 0.0);
    for (std::size_t c = 0; c < s.size(); ++c) {
        for (std::size_t k = col_start_[c]; k < col_start_[c + 1]; ++k) {
            s[c] += std::abs(col_values_[k]);
        }
    }
    return s;
}

Sinogram FanBeamProjector::project(const Image& u) const
{
    if (u.width() != geom_.image_size || u.height() != geom_.image_size) {
        throw ShapeError("project: image is " + std::to_string(u.width()) + "x" + std::to_string(u.height()) +
                         ", geometry expects " + std::to_string(geom_.image_size));
    }
    Sinogram g(geom_.n_views(), geom_.n_bins);
    apply(u.values(), g.values());
    return g;
}

Image FanBeamProjector::backproject(const Sinogram& y) const
{
    if (y.n_views() != geom_.n_views() || y.n_bins() != geom_.n_bins) {
        throw ShapeError("backproject: sinogram shape does not match geometry");
    }
    Image u = Image::square(geom_.image_size);
    apply_transpose(y.values(), u.values());
    return u;
}

Sinogram project(const FanBeamGeometry& geom, const Image& u)
{
    return FanBeamProjector(geom).project(u);
}

Image backproject(const FanBeamGeometry& geom, const Sinogram& y)
{
    return FanBeamProjector(geom).backproject(y);
}

} // namespace pdct
