#include "pdct/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdct/error.hpp"

namespace pdct {

namespace {

void require_length(std::size_t expected, std::size_t got, const char* what)
{
    if (expected != got) {
        throw ShapeError(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                         std::to_string(got));
    }
}

template <Field F>
void require_same_shape(const F& a, const F& b, const char* what)
{
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": dimension mismatch");
    }
}

} // namespace

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill)
{
}

Image::Image(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values))
{
    require_length(width * height, values_.size(), "Image");
}

Sinogram::Sinogram(std::size_t n_views, std::size_t n_bins, double fill)
    : n_views_(n_views), n_bins_(n_bins), values_(n_views * n_bins, fill)
{
}

Sinogram::Sinogram(std::size_t n_views, std::size_t n_bins, std::vector<double> values)
    : n_views_(n_views), n_bins_(n_bins), values_(std::move(values))
{
    require_length(n_views * n_bins, values_.size(), "Sinogram");
}

VectorField::VectorField(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(2 * width * height, fill)
{
}

VectorField::VectorField(const Image& s, const Image& t) : width_(s.width()), height_(s.height())
{
    if (!s.same_shape(t)) {
        throw ShapeError("VectorField: s and t components differ in shape");
    }
    values_.reserve(2 * s.size());
    values_.insert(values_.end(), s.values().begin(), s.values().end());
    values_.insert(values_.end(), t.values().begin(), t.values().end());
}

Image VectorField::s_image() const
{
    return Image(width_, height_, std::vector<double>(s().begin(), s().end()));
}

Image VectorField::t_image() const
{
    return Image(width_, height_, std::vector<double>(t().begin(), t().end()));
}

double dot(std::span<const double> a, std::span<const double> b)
{
    require_length(a.size(), b.size(), "dot");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sum += a[k] * b[k];
    }
    return sum;
}

Norms norms(std::span<const double> x)
{
    Norms n;
    double sq = 0.0;
    for (double v : x) {
        const double a = std::abs(v);
        n.l1 += a;
        sq += v * v;
        n.linf = std::max(n.linf, a);
    }
    n.l2 = std::sqrt(sq);
    return n;
}

double norm2(std::span<const double> x)
{
    double sq = 0.0;
    for (double v : x) {
        sq += v * v;
    }
    return std::sqrt(sq);
}

double max_abs(std::span<const double> x)
{
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool all_finite(std::span<const double> x)
{
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

template <Field F>
double inner_product(const F& a, const F& b)
{
    require_same_shape(a, b, "inner_product");
    return dot(a.values(), b.values());
}

Image magnitude(const VectorField& v)
{
    Image out(v.width(), v.height());
    const auto s = v.s();
    const auto t = v.t();
    auto m = out.values();
    for (std::size_t k = 0; k < m.size(); ++k) {
        m[k] = std::hypot(s[k], t[k]);
    }
    return out;
}

template <Field F>
F& operator+=(F& a, const F& b)
{
    require_same_shape(a, b, "operator+=");
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) {
        av[k] += bv[k];
    }
    return a;
}

template <Field F>
F& operator-=(F& a, const F& b)
{
    require_same_shape(a, b, "operator-=");
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) {
        av[k] -= bv[k];
    }
    return a;
}

template <Field F>
F& operator*=(F& a, double s)
{
    for (double& v : a.values()) {
        v *= s;
    }
    return a;
}

template double inner_product(const Image&, const Image&);
template double inner_product(const Sinogram&, const Sinogram&);
template double inner_product(const VectorField&, const VectorField&);
template Image& operator+=(Image&, const Image&);
template Sinogram& operator+=(Sinogram&, const Sinogram&);
template VectorField& operator+=(VectorField&, const VectorField&);
template Image& operator-=(Image&, const Image&);
template Sinogram& operator-=(Sinogram&, const Sinogram&);
template VectorField& operator-=(VectorField&, const VectorField&);
template Image& operator*=(Image&, double);
template Sinogram& operator*=(Sinogram&, double);
template VectorField& operator*=(VectorField&, double);

} // namespace pdct
