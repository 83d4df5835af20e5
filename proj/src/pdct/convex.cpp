#include "pdct/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdct/error.hpp"

namespace pdct {

namespace {

void require_sizes(std::size_t y, std::size_t g, std::size_t sigma, const char* what)
{
    if (y != g || y != sigma) {
        throw ShapeError(std::string(what) + ": operand sizes differ");
    }
}

} // namespace

void DataTerm::validate() const
{
    if (kind == DataKind::KullbackLeibler) {
        for (double v : g.values()) {
            if (!(v >= 0.0)) {
                throw ParameterError("KL data term requires nonnegative data");
            }
        }
    }
    if (kind == DataKind::BallConstraint && !(epsilon > 0.0)) {
        throw ParameterError("data-ball radius epsilon must be positive");
    }
}

void prox_ls_dual_inplace(std::span<double> y, std::span<const double> g, std::span<const double> sigma)
{
    require_sizes(y.size(), g.size(), sigma.size(), "prox_ls_dual");
    for (std::size_t k = 0; k < y.size(); ++k) {
        y[k] = (y[k] - sigma[k] * g[k]) / (1.0 + sigma[k]);
    }
}

void prox_kl_dual_inplace(std::span<double> y, std::span<const double> g, std::span<const double> sigma)
{
    require_sizes(y.size(), g.size(), sigma.size(), "prox_kl_dual");
    for (std::size_t k = 0; k < y.size(); ++k) {
        const double d = y[k] - 1.0;
        const double r = std::sqrt(d * d + 4.0 * sigma[k] * g[k]);
        // 1 - y' = (r - d) / 2; for d > 0 use the cancellation-free form
        const double slack = d > 0.0 ? 2.0 * sigma[k] * g[k] / (r + d) : 0.5 * (r - d);
        y[k] = 1.0 - slack;
    }
}

void prox_l1_dual_inplace(std::span<double> y, std::span<const double> g, std::span<const double> sigma)
{
    require_sizes(y.size(), g.size(), sigma.size(), "prox_l1_dual");
    for (std::size_t k = 0; k < y.size(); ++k) {
        y[k] = std::clamp(y[k] - sigma[k] * g[k], -1.0, 1.0);
    }
}

void prox_ball_dual_inplace(std::span<double> y, std::span<const double> g, double epsilon, double sigma)
{
    if (y.size() != g.size()) {
        throw ShapeError("prox_ball_dual: operand sizes differ");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        y[k] -= sigma * g[k];
        sq += y[k] * y[k];
    }
    const double nrm = std::sqrt(sq);
    const double shrink = nrm > sigma * epsilon ? 1.0 - sigma * epsilon / nrm : 0.0;
    for (double& v : y) {
        v *= shrink;
    }
}

void prox_tv_dual_inplace(std::span<double> s, std::span<double> t, double bound)
{
    if (s.size() != t.size()) {
        throw ShapeError("prox_tv_dual: component sizes differ");
    }
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double mag = std::hypot(s[k], t[k]);
        if (mag > bound) {
            double scale = bound / mag;
            // rounding can leave the rescaled magnitude an ulp above the bound
            while (std::hypot(scale * s[k], scale * t[k]) > bound) {
                scale = std::nextafter(scale, 0.0);
            }
            s[k] *= scale;
            t[k] *= scale;
        }
    }
}

void pos_inplace(std::span<double> x)
{
    for (double& v : x) {
        v = v > 0.0 ? v : 0.0;
    }
}

namespace {

template <class Kernel>
Sinogram sinogram_prox(const Sinogram& y, const Sinogram& g, double sigma, Kernel kernel)
{
    if (!y.same_shape(g)) {
        throw ShapeError("dual prox: y and g differ in shape");
    }
    if (!(sigma > 0.0)) {
        throw ParameterError("prox step sigma must be positive");
    }
    Sinogram out = y;
    const std::vector<double> steps(y.size(), sigma);
    kernel(out.values(), g.values(), std::span<const double>(steps));
    return out;
}

} // namespace

Sinogram prox_ls_dual(const Sinogram& y, const Sinogram& g, double sigma)
{
    return sinogram_prox(y, g, sigma, prox_ls_dual_inplace);
}

Sinogram prox_kl_dual(const Sinogram& y, const Sinogram& g, double sigma)
{
    for (double v : g.values()) {
        if (!(v >= 0.0)) {
            throw ParameterError("prox_kl_dual: data must be nonnegative");
        }
    }
    return sinogram_prox(y, g, sigma, prox_kl_dual_inplace);
}

Sinogram prox_l1_dual(const Sinogram& y, const Sinogram& g, double sigma)
{
    return sinogram_prox(y, g, sigma, prox_l1_dual_inplace);
}

Sinogram prox_ball_dual(const Sinogram& y, const Sinogram& g, double epsilon, double sigma)
{
    if (!(epsilon > 0.0)) {
        throw ParameterError("prox_ball_dual: epsilon must be positive");
    }
    return sinogram_prox(y, g, sigma, [&](std::span<double> v, std::span<const double> gv, std::span<const double>) {
        prox_ball_dual_inplace(v, gv, epsilon, sigma);
    });
}

VectorField prox_tv_dual(const VectorField& z, double lambda)
{
    if (!(lambda > 0.0)) {
        throw ParameterError("prox_tv_dual: lambda must be positive");
    }
    VectorField out = z;
    prox_tv_dual_inplace(out.s(), out.t(), lambda);
    return out;
}

Image pos(Image x)
{
    pos_inplace(x.values());
    return x;
}

Sinogram pos(Sinogram x)
{
    pos_inplace(x.values());
    return x;
}

double conjugate_ls(std::span<const double> p, std::span<const double> g)
{
    return 0.5 * dot(p, p) + dot(p, g);
}

double conjugate_kl(std::span<const double> p, std::span<const double> g)
{
    if (p.size() != g.size()) {
        throw ShapeError("conjugate_kl: operand sizes differ");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (g[k] != 0.0) {
            sum -= g[k] * std::log(std::max(1.0 - p[k], kLogFloor));
        }
    }
    return sum;
}

double conjugate_l1(std::span<const double> p, std::span<const double> g)
{
    return dot(p, g);
}

double conjugate_ball(std::span<const double> p, std::span<const double> g, double epsilon)
{
    return epsilon * norm2(p) + dot(p, g);
}

double conjugate_value(const DataTerm& term, const Sinogram& p)
{
    if (!p.same_shape(term.g)) {
        throw ShapeError("conjugate_value: p and g differ in shape");
    }
    switch (term.kind) {
    case DataKind::LeastSquares:
        return conjugate_ls(p.values(), term.g.values());
    case DataKind::KullbackLeibler:
        return conjugate_kl(p.values(), term.g.values());
    case DataKind::L1:
        return conjugate_l1(p.values(), term.g.values());
    case DataKind::BallConstraint:
        return conjugate_ball(p.values(), term.g.values(), term.epsilon);
    }
    return 0.0;
}

double legendre_1d(std::span<const double> grid, std::span<const double> f, double x)
{
    if (grid.empty()) {
        throw ParameterError("legendre_1d: empty grid");
    }
    if (grid.size() != f.size()) {
        throw ShapeError("legendre_1d: grid and function values differ in length");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        best = std::max(best, x * grid[k] - f[k]);
    }
    return best;
}

} // namespace pdct
