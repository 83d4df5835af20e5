#include "pdct/cp.hpp"

#include <cmath>
#include <string>

#include "pdct/error.hpp"

namespace pdct {

CpSteps CpSteps::uniform(const LinearOperator& k, double sigma, double tau)
{
    return {std::vector<double>(k.range_size(), sigma), std::vector<double>(k.domain_size(), tau)};
}

CpResult run_generic_cp(const LinearOperator& k, const DualResolvent& dual_prox, const PrimalResolvent& primal_prox,
                        const CpSteps& steps, const CpOptions& opts, const GapEvaluator& gap, const ReportSink& sink)
{
    const std::size_t nx = k.domain_size();
    const std::size_t ny = k.range_size();
    if (steps.sigma.size() != ny || steps.tau.size() != nx) {
        throw ShapeError("run_generic_cp: step weights do not match the operator");
    }
    if (opts.max_iters < 0) {
        throw ParameterError("run_generic_cp: iteration budget must be nonnegative");
    }
    if (!(opts.theta >= 0.0 && opts.theta <= 1.0)) {
        throw ParameterError("run_generic_cp: theta must lie in [0, 1]");
    }
    const int interval = opts.report_interval > 0 ? opts.report_interval : 1;

    CpResult r;
    r.x.assign(nx, 0.0);
    r.x_bar.assign(nx, 0.0);
    r.y.assign(ny, 0.0);
    r.kx.assign(ny, 0.0);
    r.kty.assign(nx, 0.0);
    std::vector<double> x_old(nx);
    std::vector<double> kx_old(ny);
    const double theta = opts.theta;

    auto evaluate = [&](int n) -> std::optional<IterationReport> {
        if (!gap) {
            return std::nullopt;
        }
        return IterationReport{n, gap(CpView{n, r.x, r.y, r.kx, r.kty})};
    };

    auto report = evaluate(0);
    if (report && sink) {
        sink(*report);
    }
    bool done = report && report->gap.converged(opts.gap_tol);
    r.converged = done;
    r.final_report = report;

    int n = 0;
    while (!done && n < opts.max_iters) {
        // dual step, with K xbar = (1 + theta) K x_n - theta K x_{n-1}
        for (std::size_t j = 0; j < ny; ++j) {
            const double kxbar = n == 0 ? r.kx[j] : (1.0 + theta) * r.kx[j] - theta * kx_old[j];
            r.y[j] += steps.sigma[j] * kxbar;
        }
        dual_prox(r.y, steps.sigma);

        // primal step
        k.apply_transpose(r.y, r.kty);
        x_old = r.x;
        for (std::size_t i = 0; i < nx; ++i) {
            r.x[i] -= steps.tau[i] * r.kty[i];
        }
        primal_prox(r.x, steps.tau);
        for (std::size_t i = 0; i < nx; ++i) {
            r.x_bar[i] = r.x[i] + theta * (r.x[i] - x_old[i]);
        }

        kx_old.swap(r.kx);
        k.apply(r.x, r.kx);
        ++n;

        if (!all_finite(r.x) || !all_finite(r.y)) {
            throw DivergenceError("primal-dual iterate became non-finite at iteration " + std::to_string(n), n);
        }

        report = evaluate(n);
        if (report) {
            done = report->gap.converged(opts.gap_tol);
            if (sink && (n % interval == 0 || done || n == opts.max_iters)) {
                sink(*report);
            }
        }
    }
    r.iterations = n;
    r.converged = done;
    if (report) {
        r.final_report = report;
    }
    return r;
}

} // namespace pdct
