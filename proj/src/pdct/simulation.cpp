#include "pdct/simulation.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "pdct/error.hpp"
#include "pdct/rng.hpp"

namespace pdct {

namespace {

// stream ids for the phantom generator
constexpr std::uint64_t kBlobStream = 1;
constexpr std::uint64_t kCalcStream = 2;

// Geometry, in normalized coordinates where the grid spans [-1, 1]^2.
constexpr double kBreastRadius = 1.0;
constexpr double kSkinFraction = 0.03;
constexpr double kGlandularZone = 0.6;
constexpr double kClusterZone = 0.4;
constexpr double kClusterSpread = 0.08;

struct Ellipse {
    double cx, cy, a, b, cos_r, sin_r;

    bool contains(double x, double y) const
    {
        const double dx = x - cx;
        const double dy = y - cy;
        const double u = (dx * cos_r + dy * sin_r) / a;
        const double v = (-dx * sin_r + dy * cos_r) / b;
        return u * u + v * v <= 1.0;
    }
};

} // namespace

void PhantomSpec::validate() const
{
    if (m < 32) {
        throw ParameterError("phantom needs at least 32 pixels per side to hold its structures");
    }
    if (!(calc_min <= calc_max)) {
        throw ParameterError("calcification range is empty");
    }
}

void NoiseSpec::validate() const
{
    if (!(incident_counts > 0.0) || !std::isfinite(incident_counts)) {
        throw ParameterError("incident photon count must be positive");
    }
}

Image make_phantom(const PhantomSpec& spec)
{
    spec.validate();
    const std::size_t m = spec.m;
    const double px = 2.0 / static_cast<double>(m);
    const double skin = std::max(kSkinFraction * kBreastRadius, 1.5 * px);
    const double inner = kBreastRadius - skin;

    CounterRng blob_rng(spec.seed, kBlobStream);
    std::vector<Ellipse> blobs;
    for (std::size_t k = 0; k < spec.n_blobs; ++k) {
        const double r = kGlandularZone * inner * std::sqrt(blob_rng.uniform());
        const double phi = 2.0 * std::numbers::pi * blob_rng.uniform();
        const double a = blob_rng.uniform(0.08, 0.25) * inner;
        const double b = blob_rng.uniform(0.08, 0.25) * inner;
        const double rot = std::numbers::pi * blob_rng.uniform();
        blobs.push_back({r * std::cos(phi), r * std::sin(phi), a, b, std::cos(rot), std::sin(rot)});
    }

    Image u = Image::square(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double y = -1.0 + (static_cast<double>(j) + 0.5) * px;
        for (std::size_t i = 0; i < m; ++i) {
            const double x = -1.0 + (static_cast<double>(i) + 0.5) * px;
            const double r = std::hypot(x, y);
            if (r > kBreastRadius) {
                continue;
            }
            if (r > inner) {
                u(i, j) = spec.skin_value;
                continue;
            }
            u(i, j) = spec.fat_value;
            for (const auto& e : blobs) {
                if (e.contains(x, y)) {
                    u(i, j) = spec.fibroglandular_value;
                    break;
                }
            }
        }
    }

    // calcification cluster: discs of 1-2 pixels diameter around one centre
    CounterRng calc_rng(spec.seed, kCalcStream);
    const double cr = kClusterZone * inner * std::sqrt(calc_rng.uniform());
    const double cphi = 2.0 * std::numbers::pi * calc_rng.uniform();
    const double ccx = cr * std::cos(cphi);
    const double ccy = cr * std::sin(cphi);
    for (std::size_t k = 0; k < spec.n_calcifications; ++k) {
        const double dr = kClusterSpread * std::sqrt(calc_rng.uniform());
        const double dphi = 2.0 * std::numbers::pi * calc_rng.uniform();
        const double radius_px = calc_rng.uniform(0.5, 1.0);
        const double value = calc_rng.uniform(spec.calc_min, spec.calc_max);
        // centre in pixel coordinates
        const double ci = (ccx + dr * std::cos(dphi) + 1.0) / px;
        const double cj = (ccy + dr * std::sin(dphi) + 1.0) / px;
        const auto i0 = static_cast<long>(std::floor(ci));
        const auto j0 = static_cast<long>(std::floor(cj));
        for (long j = j0 - 1; j <= j0 + 1; ++j) {
            for (long i = i0 - 1; i <= i0 + 1; ++i) {
                if (i < 0 || j < 0 || i >= static_cast<long>(m) || j >= static_cast<long>(m)) {
                    continue;
                }
                const double d = std::hypot(static_cast<double>(i) + 0.5 - ci, static_cast<double>(j) + 0.5 - cj);
                if ((i == i0 && j == j0) || d <= radius_px) {
                    u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = value;
                }
            }
        }
    }
    return u;
}

Sinogram simulate_sinogram(const FanBeamProjector& a, const Image& u)
{
    return a.project(u);
}

Sinogram simulate_sinogram(const FanBeamGeometry& geom, const Image& u)
{
    return project(geom, u);
}

Sinogram add_poisson_noise(const Sinogram& g, const NoiseSpec& noise)
{
    noise.validate();
    const double n0 = noise.incident_counts;
    Sinogram out(g.n_views(), g.n_bins());
    const auto in = g.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < in.size(); ++k) {
        if (!(in[k] >= 0.0) || !std::isfinite(in[k])) {
            throw ParameterError("add_poisson_noise: line integrals must be finite and nonnegative");
        }
        CounterRng rng(noise.seed, k);
        const auto counts = poisson(rng, n0 * std::exp(-in[k]));
        dst[k] = std::log(n0 / static_cast<double>(std::max<std::int64_t>(counts, 1)));
    }
    return out;
}

} // namespace pdct
