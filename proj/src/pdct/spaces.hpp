#pragma once

// Dense fields for the three vector spaces of the reconstruction problem:
// images (I), sinograms (D) and per-pixel 2-vector fields (V = I x I).
//
// Pixel convention, shared by every module: an M x M image is stored
// row-major. The column index i runs along the s axis, the row index j along
// the t axis, and pixel (i, j) lives at values[j * M + i].

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pdct {

enum class FieldKind : std::uint32_t { Image = 1, Sinogram = 2, VectorField = 3 };

class Image {
public:
    Image() = default;
    Image(std::size_t width, std::size_t height, double fill = 0.0);
    Image(std::size_t width, std::size_t height, std::vector<double> values);

    static Image square(std::size_t m, double fill = 0.0) { return Image(m, m, fill); }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return values_[j * width_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[j * width_ + i]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool same_shape(const Image& o) const noexcept { return width_ == o.width_ && height_ == o.height_; }

    bool operator==(const Image&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> values_;
};

class Sinogram {
public:
    Sinogram() = default;
    Sinogram(std::size_t n_views, std::size_t n_bins, double fill = 0.0);
    Sinogram(std::size_t n_views, std::size_t n_bins, std::vector<double> values);

    std::size_t n_views() const noexcept { return n_views_; }
    std::size_t n_bins() const noexcept { return n_bins_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(std::size_t view, std::size_t bin) { return values_[view * n_bins_ + bin]; }
    double operator()(std::size_t view, std::size_t bin) const { return values_[view * n_bins_ + bin]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool same_shape(const Sinogram& o) const noexcept { return n_views_ == o.n_views_ && n_bins_ == o.n_bins_; }

    bool operator==(const Sinogram&) const = default;

private:
    std::size_t n_views_ = 0;
    std::size_t n_bins_ = 0;
    std::vector<double> values_;
};

// Both components share one contiguous buffer, s first, so a VectorField can
// be handed to flat operators as a single span of length 2 * width * height.
class VectorField {
public:
    VectorField() = default;
    VectorField(std::size_t width, std::size_t height, double fill = 0.0);
    VectorField(const Image& s, const Image& t);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return width_ * height_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<double> s() noexcept { return {values_.data(), pixel_count()}; }
    std::span<const double> s() const noexcept { return {values_.data(), pixel_count()}; }
    std::span<double> t() noexcept { return {values_.data() + pixel_count(), pixel_count()}; }
    std::span<const double> t() const noexcept { return {values_.data() + pixel_count(), pixel_count()}; }

    Image s_image() const;
    Image t_image() const;

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool same_shape(const VectorField& o) const noexcept { return width_ == o.width_ && height_ == o.height_; }

    bool operator==(const VectorField&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> values_;
};

template <class F>
concept Field = std::same_as<F, Image> || std::same_as<F, Sinogram> || std::same_as<F, VectorField>;

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

// Flat-span kernels. Every reduction runs in index order so results are
// bit-reproducible.
double dot(std::span<const double> a, std::span<const double> b);
Norms norms(std::span<const double> x);
double norm2(std::span<const double> x);
double max_abs(std::span<const double> x);
bool all_finite(std::span<const double> x);

template <Field F>
double inner_product(const F& a, const F& b);

template <Field F>
Norms norms(const F& x) { return norms(x.values()); }

Image magnitude(const VectorField& v);

template <Field F>
F& operator+=(F& a, const F& b);
template <Field F>
F& operator-=(F& a, const F& b);
template <Field F>
F& operator*=(F& a, double s);

template <Field F>
F operator+(F a, const F& b) { return a += b; }
template <Field F>
F operator-(F a, const F& b) { return a -= b; }
template <Field F>
F operator*(double s, F a) { return a *= s; }

} // namespace pdct
