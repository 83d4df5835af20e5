#include "pdct/solvers.hpp"

#include <cmath>
#include <memory>

#include "pdct/convex.hpp"
#include "pdct/error.hpp"
#include "pdct/gradient.hpp"
#include "pdct/power_method.hpp"

namespace pdct {

void SolverConfig::validate() const
{
    if (max_iters < 0) {
        throw ParameterError("max_iters must be nonnegative");
    }
    if (!(gap_tol > 0.0)) {
        throw ParameterError("gap_tol must be positive");
    }
    if (!(theta >= 0.0 && theta <= 1.0)) {
        throw ParameterError("theta must lie in [0, 1]");
    }
    if (!(step_safety > 0.0 && step_safety <= 1.0)) {
        throw ParameterError("step_safety must lie in (0, 1]");
    }
    if (power_iters < 1) {
        throw ParameterError("power_iters must be at least 1");
    }
    const bool penalized = instance == Instance::L2TV || instance == Instance::KLTV || instance == Instance::L1TV ||
                           instance == Instance::PrecondKLTV;
    if (penalized && !(lambda > 0.0)) {
        throw ParameterError("lambda must be positive for " + std::string(instance_name(instance)));
    }
    if (instance == Instance::ConstrainedTV && lambda_in_operator && !(lambda > 0.0)) {
        throw ParameterError("lambda must be positive when folded into the gradient");
    }
    if (instance == Instance::ConstrainedTV && !(epsilon > 0.0)) {
        throw ParameterError("epsilon must be positive for constrained_tv");
    }
}

CpSteps preconditioned_steps(const LinearOperator& k)
{
    CpSteps s{k.abs_row_sums(), k.abs_col_sums()};
    for (double& v : s.sigma) {
        v = v > 0.0 ? 1.0 / v : 0.0;
    }
    for (double& v : s.tau) {
        v = v > 0.0 ? 1.0 / v : 0.0;
    }
    return s;
}

namespace {

bool is_kl(Instance inst)
{
    return inst == Instance::KLTV || inst == Instance::PrecondKLTV;
}

// K and the TV threshold for one configured run.
struct Assembly {
    std::unique_ptr<GradientOperator> grad;
    std::unique_ptr<StackedOperator> stacked;
    const LinearOperator* k = nullptr;
    double tv_bound = 0.0;
};

Assembly assemble(const LinearOperator& a, std::size_t m, const SolverConfig& cfg)
{
    Assembly as;
    if (!has_tv(cfg.instance)) {
        as.k = &a;
        return as;
    }
    const bool absorbed = cfg.instance == Instance::PrecondKLTV || cfg.lambda_in_operator;
    as.grad = std::make_unique<GradientOperator>(m, absorbed ? cfg.lambda : 1.0);
    as.stacked = std::make_unique<StackedOperator>(a, *as.grad);
    as.k = as.stacked.get();
    as.tv_bound = (absorbed || cfg.instance == Instance::ConstrainedTV) ? 1.0 : cfg.lambda;
    return as;
}

void check_inputs(const LinearOperator& a, std::size_t m, const Sinogram& g, const SolverConfig& cfg)
{
    cfg.validate();
    if (a.domain_size() != m * m) {
        throw ShapeError("solver: operator domain does not match an " + std::to_string(m) + "x" +
                         std::to_string(m) + " image");
    }
    if (a.range_size() != g.size()) {
        throw ShapeError("solver: data size does not match the operator range");
    }
    if (!all_finite(g.values())) {
        throw ParameterError("solver: data contains non-finite values");
    }
    if (is_kl(cfg.instance)) {
        for (double v : g.values()) {
            if (v < 0.0) {
                throw ParameterError("KL instances require nonnegative data");
            }
        }
    }
}

SolveResult run(std::size_t m, const Sinogram& g, const SolverConfig& cfg,
                const Assembly& as, const CpSteps& steps, const ReportSink& sink)
{
    const std::size_t nd = g.size();
    const auto gv = g.values();
    const Instance inst = cfg.instance;
    const double bound = as.tv_bound;

    DualResolvent dual;
    auto tv_part = [nd, bound](std::span<double> w) {
        auto q = w.subspan(nd);
        const std::size_t half = q.size() / 2;
        prox_tv_dual_inplace(q.first(half), q.subspan(half), bound);
    };
    switch (inst) {
    case Instance::LS:
    case Instance::LSNonNeg:
        dual = [gv](std::span<double> w, std::span<const double> s) { prox_ls_dual_inplace(w, gv, s); };
        break;
    case Instance::L2TV:
        dual = [gv, nd, tv_part](std::span<double> w, std::span<const double> s) {
            prox_ls_dual_inplace(w.first(nd), gv, s.first(nd));
            tv_part(w);
        };
        break;
    case Instance::KLTV:
    case Instance::PrecondKLTV:
        dual = [gv, nd, tv_part](std::span<double> w, std::span<const double> s) {
            prox_kl_dual_inplace(w.first(nd), gv, s.first(nd));
            tv_part(w);
        };
        break;
    case Instance::L1TV:
        dual = [gv, nd, tv_part](std::span<double> w, std::span<const double> s) {
            prox_l1_dual_inplace(w.first(nd), gv, s.first(nd));
            tv_part(w);
        };
        break;
    case Instance::ConstrainedTV: {
        const double sigma = steps.sigma.empty() ? 0.0 : steps.sigma.front();
        for (double v : steps.sigma) {
            if (v != sigma) {
                throw ParameterError("constrained_tv needs a scalar dual step");
            }
        }
        const double eps = cfg.epsilon;
        dual = [gv, nd, tv_part, eps, sigma](std::span<double> w, std::span<const double>) {
            prox_ball_dual_inplace(w.first(nd), gv, eps, sigma);
            tv_part(w);
        };
        break;
    }
    }

    const bool nonneg = inst == Instance::LSNonNeg || cfg.nonneg_images;
    PrimalResolvent primal = [nonneg](std::span<double> v, std::span<const double>) {
        if (nonneg) {
            pos_inplace(v);
        }
    };

    const bool tv = has_tv(inst);
    GapEvaluator gap = [&](const CpView& view) {
        GapInputs in;
        in.g = gv;
        in.u = view.x;
        in.p = view.y.first(nd);
        in.au = view.kx.first(nd);
        if (tv) {
            in.q = view.y.subspan(nd);
            in.grad_u = view.kx.subspan(nd);
        }
        in.kty = view.kty;
        in.tv_weight = tv ? bound : 0.0;
        in.epsilon = cfg.epsilon;
        in.nonneg_images = cfg.nonneg_images && inst != Instance::LSNonNeg;
        return evaluate_gap(inst, in);
    };

    CpOptions opts;
    opts.max_iters = cfg.max_iters;
    opts.theta = cfg.theta;
    opts.gap_tol = cfg.gap_tol;
    opts.report_interval = cfg.report_interval;

    CpResult cp = run_generic_cp(*as.k, dual, primal, steps, opts, gap, sink);

    SolveResult out;
    out.u = Image(m, m, std::move(cp.x));
    out.u_bar = Image(m, m, std::move(cp.x_bar));
    out.p = Sinogram(g.n_views(), g.n_bins(), std::vector<double>(cp.y.begin(), cp.y.begin() + nd));
    if (tv) {
        const std::size_t px = m * m;
        Image s(m, m, std::vector<double>(cp.y.begin() + nd, cp.y.begin() + nd + px));
        Image t(m, m, std::vector<double>(cp.y.begin() + nd + px, cp.y.end()));
        out.q = VectorField(s, t);
    }
    out.iterations = cp.iterations;
    out.converged = cp.converged;
    if (cp.final_report) {
        out.final_report = *cp.final_report;
    }
    return out;
}

} // namespace

SolveResult solve_with_steps(const LinearOperator& a, std::size_t m, const Sinogram& g, const SolverConfig& cfg,
                             const CpSteps& steps, const ReportSink& sink)
{
    check_inputs(a, m, g, cfg);
    const Assembly as = assemble(a, m, cfg);
    return run(m, g, cfg, as, steps, sink);
}

SolveResult solve(const LinearOperator& a, std::size_t m, const Sinogram& g, const SolverConfig& cfg,
                  const ReportSink& sink)
{
    check_inputs(a, m, g, cfg);
    const Assembly as = assemble(a, m, cfg);
    if (cfg.instance == Instance::PrecondKLTV) {
        return run(m, g, cfg, as, preconditioned_steps(*as.k), sink);
    }
    const auto pm = power_method(*as.k, PowerMethodOptions{cfg.power_iters, 1e-12});
    const double step = cfg.step_safety / pm.norm;
    SolveResult r = run(m, g, cfg, as, CpSteps::uniform(*as.k, step, step), sink);
    r.operator_norm = pm.norm;
    r.sigma = step;
    r.tau = step;
    return r;
}

namespace {

SolveResult solve_instance(Instance inst, const Sinogram& g, const FanBeamProjector& a, SolverConfig cfg,
                           const ReportSink& sink)
{
    cfg.instance = inst;
    return solve(a, a.geometry().image_size, g, cfg, sink);
}

} // namespace

SolveResult solve_ls(const Sinogram& g, const FanBeamProjector& a, SolverConfig cfg, const ReportSink& sink)
{
    return solve_instance(Instance::LS, g, a, cfg, sink);
}

SolveResult solve_ls_nonneg(const Sinogram& g, const FanBeamProjector& a, SolverConfig cfg, const ReportSink& sink)
{
    return solve_instance(Instance::LSNonNeg, g, a, cfg, sink);
}

SolveResult solve_l2tv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                       const ReportSink& sink)
{
    cfg.lambda = lambda;
    return solve_instance(Instance::L2TV, g, a, cfg, sink);
}

SolveResult solve_kltv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                       const ReportSink& sink)
{
    cfg.lambda = lambda;
    return solve_instance(Instance::KLTV, g, a, cfg, sink);
}

SolveResult solve_l1tv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                       const ReportSink& sink)
{
    cfg.lambda = lambda;
    return solve_instance(Instance::L1TV, g, a, cfg, sink);
}

SolveResult solve_constrained_tv(const Sinogram& g, const FanBeamProjector& a, double epsilon, SolverConfig cfg,
                                 const ReportSink& sink)
{
    cfg.epsilon = epsilon;
    return solve_instance(Instance::ConstrainedTV, g, a, cfg, sink);
}

SolveResult solve_precond_kltv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                               const ReportSink& sink)
{
    cfg.lambda = lambda;
    return solve_instance(Instance::PrecondKLTV, g, a, cfg, sink);
}

} // namespace pdct
