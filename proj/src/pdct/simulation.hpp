#pragma once

#include <cstdint>

#include "pdct/fan_beam.hpp"
#include "pdct/spaces.hpp"

namespace pdct {

// Procedural breast phantom: a disc of fat wrapped in a skin annulus, with
// elliptical fibroglandular blobs and a small cluster of calcifications.
// Pixels outside the disc are 0.
struct PhantomSpec {
    std::size_t m = 256;
    std::uint64_t seed = 1;
    std::size_t n_calcifications = 10;
    std::size_t n_blobs = 14;
    double fat_value = 1.0;
    double fibroglandular_value = 1.1;
    double skin_value = 1.15;
    double calc_min = 1.8;
    double calc_max = 2.3;

    void validate() const;
};

struct NoiseSpec {
    double incident_counts = 1e6;   // expected photons per ray through air
    std::uint64_t seed = 7;

    void validate() const;
};

Image make_phantom(const PhantomSpec& spec);

// Noiseless data g = A u with the same projector used for reconstruction.
Sinogram simulate_sinogram(const FanBeamProjector& a, const Image& u);
Sinogram simulate_sinogram(const FanBeamGeometry& geom, const Image& u);

// Transmission Poisson noise: per ray c ~ Poisson(N0 exp(-g)) and the noisy
// line integral is ln(N0 / max(c, 1)). Ray k draws from stream k of the
// counter generator keyed by noise.seed.
Sinogram add_poisson_noise(const Sinogram& g, const NoiseSpec& noise);

} // namespace pdct
