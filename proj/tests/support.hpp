#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pdct/fan_beam.hpp"
#include "pdct/linear_operator.hpp"

namespace testing {

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) {
        x = d(rng);
    }
    return v;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    long double s = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += static_cast<long double>(a[k]) * b[k];
    }
    return static_cast<double>(s);
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// |<Kx, y> - <x, K^T y>| / (||Kx|| ||y||)
inline double adjoint_mismatch(const pdct::LinearOperator& k, const std::vector<double>& x,
                               const std::vector<double>& y)
{
    const std::vector<double> kx = k.apply(x);
    const std::vector<double> kty = k.apply_transpose(y);
    return std::abs(dot(kx, y) - dot(x, kty)) / (norm(kx) * norm(y));
}

inline pdct::FanBeamGeometry small_geometry(std::size_t m, std::size_t views, std::size_t bins, double bin_size)
{
    const double side = pdct::FanBeamGeometry::inscribed_image_side(40.0, 80.0, bins, bin_size);
    return pdct::FanBeamGeometry::circular(m, side, views, bins, bin_size);
}

} // namespace testing
