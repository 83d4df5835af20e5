#pragma once

// The seven reconstruction instances, each assembled from the generic
// primal-dual runner, an operator K and a pair of resolvents:
//
//   instance        K              dual resolvent (data | tv)       primal
//   ls              A              (y - s g)/(1 + s)                 identity
//   ls_nonneg       A              (y - s g)/(1 + s)                 pos
//   l2tv            (A; grad)      (y - s g)/(1 + s) | |q| <= lambda identity
//   kltv            (A; grad)      KL root           | |q| <= lambda identity
//   l1tv            (A; grad)      clamp to [-1, 1]  | |q| <= lambda identity
//   constrained_tv  (A; grad)      ball shrinkage    | |q| <= 1      identity
//   precond_kltv    (A; l*grad)    KL root           | |q| <= 1      identity
//
// Scalar instances use sigma = tau = step_safety / ||K||_2 with the norm from
// the power method; the preconditioned instance uses the diagonal weights
// Sigma = 1 / (|K| 1) and T = 1 / (|K|^T 1). nonneg_images swaps the primal
// resolvent for pos.

#include "pdct/cp.hpp"
#include "pdct/diagnostics.hpp"
#include "pdct/fan_beam.hpp"
#include "pdct/spaces.hpp"

namespace pdct {

struct SolverConfig {
    Instance instance = Instance::L2TV;
    double lambda = 1e-4;        // TV weight
    double epsilon = 0.0;        // data-ball radius, constrained_tv only
    int max_iters = 1000;
    double gap_tol = 1e-5;
    double theta = 1.0;
    double step_safety = 1.0;    // sigma = tau = step_safety / L
    int power_iters = 100;
    bool nonneg_images = false;
    int report_interval = 10;
    // Fold lambda into the gradient and threshold q at 1. Always on for
    // precond_kltv; optional for the other TV instances. For constrained_tv
    // the objective becomes lambda * TV, which has the same minimizer but
    // puts the dual variables on the scale of the data.
    bool lambda_in_operator = false;

    void validate() const;
};

struct SolveResult {
    Image u;
    Image u_bar;
    Sinogram p;
    VectorField q;                // empty for ls / ls_nonneg
    int iterations = 0;
    bool converged = false;
    double operator_norm = 0.0;   // 0 for the preconditioned instance
    double sigma = 0.0;           // scalar steps; 0 for the preconditioned instance
    double tau = 0.0;
    IterationReport final_report;
};

// Runs the configured instance on data g for an m x m image.
SolveResult solve(const LinearOperator& a, std::size_t m, const Sinogram& g, const SolverConfig& cfg,
                  const ReportSink& sink = {});

// Same, with caller-supplied step weights in place of the power-method or
// preconditioner steps.
SolveResult solve_with_steps(const LinearOperator& a, std::size_t m, const Sinogram& g, const SolverConfig& cfg,
                             const CpSteps& steps, const ReportSink& sink = {});

// Sigma = 1 / (|K| 1), T = 1 / (|K|^T 1), with 0 wherever the sum is 0.
CpSteps preconditioned_steps(const LinearOperator& k);

SolveResult solve_ls(const Sinogram& g, const FanBeamProjector& a, SolverConfig cfg, const ReportSink& sink = {});
SolveResult solve_ls_nonneg(const Sinogram& g, const FanBeamProjector& a, SolverConfig cfg,
                            const ReportSink& sink = {});
SolveResult solve_l2tv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                       const ReportSink& sink = {});
SolveResult solve_kltv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                       const ReportSink& sink = {});
SolveResult solve_l1tv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                       const ReportSink& sink = {});
SolveResult solve_constrained_tv(const Sinogram& g, const FanBeamProjector& a, double epsilon, SolverConfig cfg,
                                 const ReportSink& sink = {});
SolveResult solve_precond_kltv(const Sinogram& g, const FanBeamProjector& a, double lambda, SolverConfig cfg,
                               const ReportSink& sink = {});

} // namespace pdct
