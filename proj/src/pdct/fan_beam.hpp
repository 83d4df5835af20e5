#pragma once

// 2-D fan-beam geometry and the line-intersection projector.
//
// The image grid is an M x M square of side `image_side` centred on the
// rotation axis. For view angle b the source sits at R (cos b, sin b); a flat
// detector lies at distance D from the source, perpendicular to the central
// ray, with bins laid out along (-sin b, cos b). Each (view, bin) entry is the
// line integral along the segment from the source to the bin centre, i.e. the
// sum over pixels of chord length times pixel value.

#include <cstdint>
#include <vector>

#include "pdct/linear_operator.hpp"
#include "pdct/spaces.hpp"

namespace pdct {

struct FanBeamGeometry {
    double source_radius = 40.0;
    double source_detector_distance = 80.0;
    std::vector<double> angles;
    std::size_t n_bins = 512;
    double bin_size = 0.02;
    double image_side = 0.0;
    std::size_t image_size = 256;

    std::size_t n_views() const noexcept { return angles.size(); }
    double pixel_size() const noexcept { return image_side / static_cast<double>(image_size); }

    // Throws ParameterError when any invariant fails.
    void validate() const;

    // n_views angles equally spaced over a full turn, starting at 0.
    static std::vector<double> full_scan_angles(std::size_t n_views);

    // Side of the largest centred square whose inscribed disc stays inside
    // the fan for every view.
    static double inscribed_image_side(double source_radius, double source_detector_distance, std::size_t n_bins,
                                       double bin_size);

    static FanBeamGeometry circular(std::size_t image_size, double image_side, std::size_t n_views, std::size_t n_bins,
                                    double bin_size, double source_radius = 40.0,
                                    double source_detector_distance = 80.0);
};

struct Point2 {
    double s = 0.0;
    double t = 0.0;
};

struct RayHit {
    std::uint32_t pixel;
    double length;
};

// Square grid of m x m pixels with the given side length, centred at 0.
struct GridSpec {
    std::size_t m;
    double side;
};

// Chord lengths of the segment a -> b through each pixel it crosses, in
// traversal order. A segment running exactly along a pixel edge is credited
// to the pixel on the lower-index side of that edge.
std::vector<RayHit> trace_ray(const GridSpec& grid, Point2 a, Point2 b);

class FanBeamProjector final : public LinearOperator {
public:
    explicit FanBeamProjector(FanBeamGeometry geometry);

    const FanBeamGeometry& geometry() const noexcept { return geom_; }

    Point2 source(std::size_t view) const;
    Point2 bin_center(std::size_t view, std::size_t bin) const;

    std::size_t domain_size() const override { return geom_.image_size * geom_.image_size; }
    std::size_t range_size() const override { return geom_.n_views() * geom_.n_bins; }
    std::size_t nonzeros() const noexcept { return values_.size(); }

    void apply(std::span<const double> x, std::span<double> y) const override;
    void apply_transpose(std::span<const double> y, std::span<double> x) const override;
    std::vector<double> abs_row_sums() const override;
    std::vector<double> abs_col_sums() const override;

    Sinogram project(const Image& u) const;
    Image backproject(const Sinogram& y) const;

    using LinearOperator::apply;
    using LinearOperator::apply_transpose;

private:
    FanBeamGeometry geom_;
    // system matrix in compressed-row form, one row per (view, bin) ray
    std::vector<std::size_t> row_start_;
    std::vector<std::uint32_t> pixel_;
    std::vector<double> values_;
    // the same entries grouped by pixel, rows ascending
    std::vector<std::size_t> col_start_;
    std::vector<std::uint32_t> col_row_;
    std::vector<double> col_values_;
};

Sinogram project(const FanBeamGeometry& geom, const Image& u);
Image backproject(const FanBeamGeometry& geom, const Sinogram& y);

} // namespace pdct
