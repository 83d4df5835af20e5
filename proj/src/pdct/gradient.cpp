#include "pdct/gradient.hpp"

#include <cmath>

#include "pdct/error.hpp"

namespace pdct {

GradientOperator::GradientOperator(std::size_t m, double scale) : m_(m), scale_(scale)
{
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ParameterError("gradient scale must be positive and finite");
    }
}

void GradientOperator::apply(std::span<const double> x, std::span<double> v) const
{
    check_apply(x, v);
    const std::size_t m = m_;
    const double w = scale_;
    double* vs = v.data();
    double* vt = v.data() + m * m;
    for (std::size_t j = 0; j < m; ++j) {
        const double* row = x.data() + j * m;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            vs[j * m + i] = w * (row[i + 1] - row[i]);
        }
        vs[j * m + m - 1] = w * (-row[m - 1]);
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            vt[j * m + i] = w * (x[(j + 1) * m + i] - x[j * m + i]);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        vt[(m - 1) * m + i] = w * (-x[(m - 1) * m + i]);
    }
}

void GradientOperator::apply_transpose(std::span<const double> v, std::span<double> x) const
{
    check_transpose(v, x);
    const std::size_t m = m_;
    const double w = scale_;
    const double* vs = v.data();
    const double* vt = v.data() + m * m;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t k = j * m + i;
            const double ds = vs[k] - (i > 0 ? vs[k - 1] : 0.0);
            const double dt = vt[k] - (j > 0 ? vt[k - m] : 0.0);
            x[k] = w * (-ds - dt);
        }
    }
}

std::vector<double> GradientOperator::abs_row_sums() const
{
    const std::size_t m = m_;
    std::vector<double> s(2 * m * m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            s[j * m + i] = (i + 1 < m ? 2.0 : 1.0) * scale_;
            s[m * m + j * m + i] = (j + 1 < m ? 2.0 : 1.0) * scale_;
        }
    }
    return s;
}

std::vector<double> GradientOperator::abs_col_sums() const
{
    const std::size_t m = m_;
    std::vector<double> s(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            // one tap from the pixel's own row in each component, one more
            // from the preceding neighbour when it exists
            s[j * m + i] = ((i > 0 ? 2.0 : 1.0) + (j > 0 ? 2.0 : 1.0)) * scale_;
        }
    }
    return s;
}

namespace {

std::size_t square_side(const Image& u)
{
    if (u.width() != u.height()) {
        throw ShapeError("gradient requires a square image");
    }
    return u.width();
}

std::size_t square_side(const VectorField& v)
{
    if (v.width() != v.height()) {
        throw ShapeError("divergence requires a square field");
    }
    return v.width();
}

} // namespace

VectorField gradient_scaled(const Image& u, double lambda)
{
    const std::size_t m = square_side(u);
    GradientOperator op(m, lambda);
    VectorField v(m, m);
    op.apply(u.values(), v.values());
    return v;
}

Image divergence_scaled(const VectorField& v, double lambda)
{
    const std::size_t m = square_side(v);
    GradientOperator op(m, lambda);
    Image x(m, m);
    op.apply_transpose(v.values(), x.values());
    x *= -1.0;
    return x;
}

VectorField gradient(const Image& u) { return gradient_scaled(u, 1.0); }

Image divergence(const VectorField& v) { return divergence_scaled(v, 1.0); }

double total_variation(const Image& u)
{
    return norms(magnitude(gradient(u))).l1;
}

} // namespace pdct
