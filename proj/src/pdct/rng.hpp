#pragma once

// Counter-based random numbers, reproducible across implementations.
//
//   mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              return z ^ (z >> 31)
//   key      = mix64(seed + G * (stream + 1)),  G = 0x9E3779B97F4A7C15
//   draw n   = mix64(key + G * (n + 1))          (n = 0, 1, 2, ...)
//   uniform  = (draw >> 11) * 2^-53              in [0, 1)
//
// All arithmetic is modulo 2^64. Each (seed, stream) pair is an independent
// sequence, so e.g. every sinogram ray gets its own stream.

#include <cstdint>

namespace pdct {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed + kGolden * (stream + 1))) {}

    std::uint64_t next() { return mix64(key_ + kGolden * ++counter_); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Poisson variate with the given mean. Means below 10 use sequential CDF
// inversion (one uniform); larger means use Hormann's PTRS transformed
// rejection, two uniforms per trial.
std::int64_t poisson(CounterRng& rng, double mean);

} // namespace pdct
