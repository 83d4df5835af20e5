#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdct/linear_operator.hpp"

namespace pdct {

struct PowerMethodOptions {
    int max_iters = 100;
    // stop once |s_{n+1} - s_n| / s_{n+1} falls below this
    double rel_tol = 1e-12;
};

struct PowerMethodResult {
    double norm = 0.0;
    int iterations = 0;
    std::vector<double> trace;   // s_n after each iteration
};

// Largest singular value of K by power iteration on K^T K:
//   x <- K^T K x,  x <- x / ||x||,  s <- ||K x||.
// For a stacked operator (A; grad), ||K x|| is sqrt(||A x||^2 + ||grad x||^2).
PowerMethodResult power_method(const LinearOperator& k, std::span<const double> x0,
                               const PowerMethodOptions& opts = {});

// Starts from a fixed pseudo-random vector with entries in [0.5, 1.5).
PowerMethodResult power_method(const LinearOperator& k, const PowerMethodOptions& opts = {});

std::vector<double> default_power_start(std::size_t n, std::uint64_t seed = 0x5eed);

} // namespace pdct
