#include "pdct/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pdct/convex.hpp"
#include "pdct/error.hpp"
#include "pdct/gradient.hpp"

namespace pdct {

namespace {

struct InstanceName {
    Instance inst;
    std::string_view name;
};

constexpr InstanceName kInstanceNames[] = {
    {Instance::LS, "ls"},         {Instance::LSNonNeg, "ls_nonneg"},
    {Instance::L2TV, "l2tv"},     {Instance::KLTV, "kltv"},
    {Instance::L1TV, "l1tv"},     {Instance::ConstrainedTV, "constrained_tv"},
    {Instance::PrecondKLTV, "precond_kltv"},
};

double min_of(std::span<const double> x)
{
    double m = std::numeric_limits<double>::infinity();
    for (double v : x) {
        m = std::min(m, v);
    }
    return x.empty() ? 0.0 : m;
}

double max_of(std::span<const double> x)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double v : x) {
        m = std::max(m, v);
    }
    return x.empty() ? 0.0 : m;
}

double max_magnitude(std::span<const double> q)
{
    const std::size_t n = q.size() / 2;
    double m = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m = std::max(m, std::hypot(q[k], q[n + k]));
    }
    return m;
}

double sum_magnitude(std::span<const double> z)
{
    const std::size_t n = z.size() / 2;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += std::hypot(z[k], z[n + k]);
    }
    return sum;
}

double half_sq_residual(std::span<const double> au, std::span<const double> g)
{
    double sq = 0.0;
    for (std::size_t k = 0; k < au.size(); ++k) {
        const double r = au[k] - g[k];
        sq += r * r;
    }
    return 0.5 * sq;
}

double l1_residual(std::span<const double> au, std::span<const double> g)
{
    double s = 0.0;
    for (std::size_t k = 0; k < au.size(); ++k) {
        s += std::abs(au[k] - g[k]);
    }
    return s;
}

double l2_residual(std::span<const double> au, std::span<const double> g)
{
    return std::sqrt(2.0 * half_sq_residual(au, g));
}

Residual dual_feasibility(const GapInputs& in)
{
    if (in.nonneg_images) {
        return {"dual_feasibility_min", min_of(in.kty), Bound::AtLeast, 0.0};
    }
    return {"dual_feasibility", max_abs(in.kty), Bound::Zero, 0.0};
}

} // namespace

std::string_view instance_name(Instance inst)
{
    for (const auto& e : kInstanceNames) {
        if (e.inst == inst) {
            return e.name;
        }
    }
    return "unknown";
}

Instance parse_instance(std::string_view name)
{
    for (const auto& e : kInstanceNames) {
        if (e.name == name) {
            return e.inst;
        }
    }
    throw ParameterError("unknown solver instance '" + std::string(name) + "'");
}

bool has_tv(Instance inst)
{
    return inst != Instance::LS && inst != Instance::LSNonNeg;
}

double Residual::violation() const
{
    switch (bound) {
    case Bound::Zero:
        return std::abs(value - target);
    case Bound::AtMost:
        return std::max(value - target, 0.0);
    case Bound::AtLeast:
        return std::max(target - value, 0.0);
    }
    return 0.0;
}

bool GapBreakdown::converged(double tol) const
{
    if (!(std::abs(conditional_gap) <= tol)) {
        return false;
    }
    for (const auto& r : residuals) {
        if (r.gates_stop && !(r.violation() <= tol)) {
            return false;
        }
    }
    return true;
}

void GapBreakdown::finalize()
{
    primal = 0.0;
    for (const auto& t : primal_terms) {
        primal += t.value;
    }
    dual = 0.0;
    for (const auto& t : dual_terms) {
        dual += t.value;
    }
    conditional_gap = primal - dual;
}

const Residual* GapBreakdown::find(std::string_view name) const
{
    for (const auto& r : residuals) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

double kl_divergence(std::span<const double> au, std::span<const double> g)
{
    if (au.size() != g.size()) {
        throw ShapeError("kl_divergence: operand sizes differ");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < au.size(); ++k) {
        double term = au[k] - g[k];
        if (g[k] != 0.0) {
            term += g[k] * std::log(g[k]) - g[k] * std::log(std::max(au[k], kLogFloor));
        }
        sum += term;
    }
    return sum;
}

GapBreakdown evaluate_gap(Instance inst, const GapInputs& in)
{
    GapBreakdown b;
    b.residuals.push_back(dual_feasibility(in));
    const double tv = has_tv(inst) ? in.tv_weight * sum_magnitude(in.grad_u) : 0.0;
    const double q_excess = has_tv(inst) ? max_magnitude(in.q) - in.tv_weight : 0.0;

    switch (inst) {
    case Instance::LS:
    case Instance::LSNonNeg:
        b.primal_terms.push_back({"data", half_sq_residual(in.au, in.g)});
        b.dual_terms.push_back({"data", -conjugate_ls(in.p, in.g)});
        if (inst == Instance::LSNonNeg) {
            b.residuals[0] = {"dual_feasibility_min", min_of(in.kty), Bound::AtLeast, 0.0};
            b.residuals.push_back({"image_min", min_of(in.u), Bound::AtLeast, 0.0});
        }
        break;
    case Instance::L2TV:
        b.primal_terms.push_back({"data", half_sq_residual(in.au, in.g)});
        b.primal_terms.push_back({"tv", tv});
        b.dual_terms.push_back({"data", -conjugate_ls(in.p, in.g)});
        b.residuals.push_back({"q_excess", q_excess, Bound::AtMost, 0.0});
        break;
    case Instance::KLTV:
    case Instance::PrecondKLTV:
        b.primal_terms.push_back({"data", kl_divergence(in.au, in.g)});
        b.primal_terms.push_back({"tv", tv});
        b.dual_terms.push_back({"data", -conjugate_kl(in.p, in.g)});
        b.residuals.push_back({"projection_min", min_of(in.au), Bound::AtLeast, 0.0});
        b.residuals.push_back({"p_excess", max_of(in.p) - 1.0, Bound::AtMost, 0.0});
        b.residuals.push_back({"q_excess", q_excess, Bound::AtMost, 0.0});
        break;
    case Instance::L1TV:
        b.primal_terms.push_back({"data", l1_residual(in.au, in.g)});
        b.primal_terms.push_back({"tv", tv});
        b.dual_terms.push_back({"data", -conjugate_l1(in.p, in.g)});
        b.residuals.push_back({"p_excess", max_abs(in.p) - 1.0, Bound::AtMost, 0.0});
        b.residuals.push_back({"q_excess", q_excess, Bound::AtMost, 0.0});
        break;
    case Instance::ConstrainedTV:
        b.primal_terms.push_back({"tv", tv});
        b.dual_terms.push_back({"data", -conjugate_ball(in.p, in.g, in.epsilon)});
        b.residuals.push_back(
            {"data_ball_excess", std::max(l2_residual(in.au, in.g) - in.epsilon, 0.0), Bound::AtMost, 0.0, true});
        b.residuals.push_back({"q_excess", q_excess, Bound::AtMost, 0.0});
        break;
    }
    b.finalize();
    return b;
}

namespace {

struct Products {
    std::vector<double> au;
    std::vector<double> grad_u;
    std::vector<double> kty;
};

Products products(const Image& u, const Sinogram& p, const VectorField* q, const LinearOperator& a)
{
    if (u.size() != a.domain_size() || p.size() != a.range_size()) {
        throw ShapeError("gap evaluation: operand shapes do not match the operator");
    }
    Products out;
    out.au = a.apply(u.values());
    out.kty = a.apply_transpose(p.values());
    if (q != nullptr) {
        if (!q->same_shape(VectorField(u.width(), u.height()))) {
            throw ShapeError("gap evaluation: q does not match the image");
        }
        GradientOperator grad(u.width());
        out.grad_u = grad.apply(u.values());
        const auto neg_div = grad.apply_transpose(q->values());
        for (std::size_t k = 0; k < out.kty.size(); ++k) {
            out.kty[k] += neg_div[k];
        }
    }
    return out;
}

GapBreakdown evaluate(Instance inst, const Image& u, const Sinogram& p, const VectorField* q, const Sinogram& g,
                      const LinearOperator& a, double tv_weight, double epsilon)
{
    if (!p.same_shape(g)) {
        throw ShapeError("gap evaluation: p and g differ in shape");
    }
    const Products pr = products(u, p, q, a);
    GapInputs in;
    in.g = g.values();
    in.u = u.values();
    in.p = p.values();
    if (q != nullptr) {
        in.q = q->values();
    }
    in.au = pr.au;
    in.grad_u = pr.grad_u;
    in.kty = pr.kty;
    in.tv_weight = tv_weight;
    in.epsilon = epsilon;
    return evaluate_gap(inst, in);
}

} // namespace

GapBreakdown gap_ls(const Image& u, const Sinogram& p, const Sinogram& g, const LinearOperator& a)
{
    return evaluate(Instance::LS, u, p, nullptr, g, a, 0.0, 0.0);
}

GapBreakdown gap_ls_nonneg(const Image& u, const Sinogram& p, const Sinogram& g, const LinearOperator& a)
{
    return evaluate(Instance::LSNonNeg, u, p, nullptr, g, a, 0.0, 0.0);
}

GapBreakdown gap_l2tv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                      const LinearOperator& a, double lambda)
{
    return evaluate(Instance::L2TV, u, p, &q, g, a, lambda, 0.0);
}

GapBreakdown gap_kltv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                      const LinearOperator& a, double lambda)
{
    return evaluate(Instance::KLTV, u, p, &q, g, a, lambda, 0.0);
}

GapBreakdown gap_l1tv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                      const LinearOperator& a, double lambda)
{
    return evaluate(Instance::L1TV, u, p, &q, g, a, lambda, 0.0);
}

GapBreakdown gap_constrained_tv(const Image& u, const Sinogram& p, const VectorField& q, const Sinogram& g,
                                const LinearOperator& a, double epsilon)
{
    return evaluate(Instance::ConstrainedTV, u, p, &q, g, a, 1.0, epsilon);
}

std::string csv_row(const IterationReport& r)
{
    const auto& res = r.gap.residuals;
    auto resid = [&](std::size_t k) { return k < res.size() ? res[k].value : 0.0; };
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.n, r.gap.primal, r.gap.dual,
                  r.gap.conditional_gap, resid(0), resid(1), resid(2));
    return buf;
}

std::string residual_legend(Instance inst, bool nonneg_images)
{
    std::string dualfeas = nonneg_images || inst == Instance::LSNonNeg
                               ? "min(K^T y), target >= 0"
                               : (has_tv(inst) ? "max|div q - A^T p|, target 0" : "max|A^T p|, target 0");
    std::string e1 = "unused (0)";
    std::string e2 = "unused (0)";
    switch (inst) {
    case Instance::LS:
        break;
    case Instance::LSNonNeg:
        e1 = "min(u), target >= 0";
        break;
    case Instance::L2TV:
        e1 = "max|q| - lambda, target <= 0";
        break;
    case Instance::KLTV:
    case Instance::PrecondKLTV:
        e1 = "min(A u), target >= 0";
        e2 = "max(p) - 1, target <= 0";
        break;
    case Instance::L1TV:
        e1 = "max|p| - 1, target <= 0";
        e2 = "max|q| - lambda, target <= 0";
        break;
    case Instance::ConstrainedTV:
        e1 = "max(||A u - g||_2 - epsilon, 0), target 0";
        e2 = "max|q| - 1, target <= 0";
        break;
    }
    return "resid_dualfeas: " + dualfeas + "\nresid_extra1: " + e1 + "\nresid_extra2: " + e2 + "\n";
}

} // namespace pdct
