#include "pdct/power_method.hpp"

#include <cmath>

#include "pdct/error.hpp"
#include "pdct/rng.hpp"
#include "pdct/spaces.hpp"

namespace pdct {

PowerMethodResult power_method(const LinearOperator& k, std::span<const double> x0, const PowerMethodOptions& opts)
{
    if (opts.max_iters < 1) {
        throw ParameterError("power method needs at least one iteration");
    }
    if (x0.size() != k.domain_size()) {
        throw ShapeError("power method start vector does not match the operator domain");
    }
    if (norm2(x0) == 0.0) {
        throw ParameterError("power method start vector must be nonzero");
    }

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> kx = k.apply(x);
    PowerMethodResult res;
    double prev = 0.0;
    for (int n = 0; n < opts.max_iters; ++n) {
        k.apply_transpose(kx, x);
        const double nx = norm2(x);
        if (nx == 0.0 || !std::isfinite(nx)) {
            throw DegenerateOperatorError("power method: K^T K x vanished at iteration " + std::to_string(n + 1));
        }
        for (double& v : x) {
            v /= nx;
        }
        k.apply(x, kx);
        const double s = norm2(kx);
        res.trace.push_back(s);
        res.norm = s;
        res.iterations = n + 1;
        if (s == 0.0) {
            throw DegenerateOperatorError("power method: ||K x|| is zero");
        }
        if (n > 0 && std::abs(s - prev) / s < opts.rel_tol) {
            break;
        }
        prev = s;
    }
    return res;
}

PowerMethodResult power_method(const LinearOperator& k, const PowerMethodOptions& opts)
{
    const auto x0 = default_power_start(k.domain_size());
    return power_method(k, x0, opts);
}

std::vector<double> default_power_start(std::size_t n, std::uint64_t seed)
{
    CounterRng rng(seed, 0);
    std::vector<double> x(n);
    for (double& v : x) {
        v = 0.5 + rng.uniform();
    }
    return x;
}

} // namespace pdct
