#pragma once

// Primal and dual objective bookkeeping for every solver instance.
//
// The conditional primal-dual gap is the primal objective minus the dual
// objective with every indicator term dropped. Each dropped indicator shows up
// instead as a signed residual with a target, e.g. max|q| - lambda <= 0.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdct/fan_beam.hpp"
#include "pdct/spaces.hpp"

namespace pdct {

enum class Instance { LS, LSNonNeg, L2TV, KLTV, L1TV, ConstrainedTV, PrecondKLTV };

std::string_view instance_name(Instance inst);
Instance parse_instance(std::string_view name);
bool has_tv(Instance inst);

struct NamedValue {
    std::string_view name;
    double value = 0.0;
};

enum class Bound { Zero, AtMost, AtLeast };

struct Residual {
    std::string_view name;
    double value = 0.0;
    Bound bound = Bound::Zero;
    double target = 0.0;
    // Also checked by the stopping rule. Set for primal constraints the
    // iteration does not enforce and the gap cannot see.
    bool gates_stop = false;

    // Distance to the feasible side; 0 when satisfied.
    double violation() const;
};

struct GapBreakdown {
    std::vector<NamedValue> primal_terms;
    std::vector<NamedValue> dual_terms;
    std::vector<Residual> residuals;   // residuals[0] is always dual feasibility
    double primal = 0.0;
    double dual = 0.0;
    double conditional_gap = 0.0;

    // Sums the terms in order and sets conditional_gap = primal - dual.
    void finalize();
    // |conditional gap| <= tol and every gating residual within tol.
    bool converged(double tol) const;
    const Residual* find(std::string_view name) const;
};

// Operator products for one iterate, as the solver already has them.
struct GapInputs {
    std::span<const double> g;
    std::span<const double> u;
    std::span<const double> p;
    std::span<const double> q;        // empty without a TV term
    std::span<const double> au;       // A u
    std::span<const double> grad_u;   // (scaled) gradient of u; empty without TV
    std::span<const double> kty;      // A^T p - div q, or A^T p
    double tv_weight = 0.0;           // multiplies sum |grad_u|; also the bound on |q|
    double epsilon = 0.0;
    bool nonneg_images = false;
};

GapBreakdown evaluate_gap(Instance inst, const GapInputs& in);

// KL data divergence sum[Au - g + g ln g - g ln Au] with 0 ln 0 = 0 and the
// log argument floored at kLogFloor.
double kl_divergence(std::span<const double> au, std::span<const double> g);

// Convenience evaluators that compute the operator products themselves.
GapBreakdown gap_ls(const Image& u, const Sinogram& p, const Sinogram& g, const LinearOperator& a);
GapBreakdown gap_ls_nonneg(const Image& u, const Sinogram& p, const Sinogram& g, const LinearOperator& a);
GapBreakdown gap_l2tv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                      const LinearOperator& a, double lambda);
GapBreakdown gap_kltv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                      const LinearOperator& a, double lambda);
GapBreakdown gap_l1tv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                      const LinearOperator& a, double lambda);
GapBreakdown gap_constrained_tv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                                const LinearOperator& a, double epsilon);

struct IterationReport {
    int n = 0;
    GapBreakdown gap;
};

// convergence.csv layout
inline constexpr std::string_view kCsvHeader = "n,primal,dual,gap,resid_dualfeas,resid_extra1,resid_extra2";
std::string csv_row(const IterationReport& r);
// Human-readable description of the three residual columns for an instance.
std::string residual_legend(Instance inst, bool nonneg_images);

} // namespace pdct
