#pragma once

// Generic first-order primal-dual iteration:
//
//   y_{n+1}    = prox_sigma[F*](y_n + sigma K xbar_n)
//   x_{n+1}    = prox_tau[G](x_n - tau K^T y_{n+1})
//   xbar_{n+1} = x_{n+1} + theta (x_{n+1} - x_n)
//
// from zero initial x, y, xbar. sigma and tau are per-component weights;
// scalar steps are the constant case. K xbar is formed from the stored K x
// products by linearity, so each iteration costs one K and one K^T apply and
// K x_{n+1} is available to the gap evaluator for free.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pdct/diagnostics.hpp"
#include "pdct/linear_operator.hpp"

namespace pdct {

struct CpSteps {
    std::vector<double> sigma;   // range-sized
    std::vector<double> tau;     // domain-sized

    static CpSteps uniform(const LinearOperator& k, double sigma, double tau);
};

struct CpOptions {
    int max_iters = 1000;
    double theta = 1.0;
    // stop when |conditional gap| <= gap_tol (and any gating residual is
    // within it too); needs a gap evaluator
    double gap_tol = 1e-5;
    // reports go to the sink at n = 0, every report_interval iterations, and
    // at the final iterate
    int report_interval = 10;
};

// Current iterate as seen by a gap evaluator.
struct CpView {
    int n;
    std::span<const double> x;
    std::span<const double> y;
    std::span<const double> kx;    // K x
    std::span<const double> kty;   // K^T y
};

// w holds y_n + sigma K xbar_n on entry and must hold the resolvent on exit.
using DualResolvent = std::function<void(std::span<double> w, std::span<const double> sigma)>;
using PrimalResolvent = std::function<void(std::span<double> v, std::span<const double> tau)>;
using GapEvaluator = std::function<GapBreakdown(const CpView&)>;
using ReportSink = std::function<void(const IterationReport&)>;

struct CpResult {
    std::vector<double> x;
    std::vector<double> x_bar;
    std::vector<double> y;
    std::vector<double> kx;
    std::vector<double> kty;
    int iterations = 0;
    bool converged = false;
    std::optional<IterationReport> final_report;
};

// Throws DivergenceError when an iterate turns non-finite.
CpResult run_generic_cp(const LinearOperator& k, const DualResolvent& dual_prox, const PrimalResolvent& primal_prox,
                        const CpSteps& steps, const CpOptions& opts, const GapEvaluator& gap = {},
                        const ReportSink& sink = {});

} // namespace pdct
