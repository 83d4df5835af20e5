#include "doctest.h"

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "pdct/convex.hpp"
#include "pdct/cp.hpp"
#include "pdct/error.hpp"
#include "pdct/gradient.hpp"
#include "pdct/simulation.hpp"
#include "pdct/solvers.hpp"
#include "support.hpp"

using namespace pdct;

namespace {

// 4 x 4 image, 36 views: a full-rank system small enough to materialize.
FanBeamProjector tiny_projector() { return FanBeamProjector(testing::small_geometry(4, 36, 12, 0.1)); }

double rmse(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}

SolverConfig tight(Instance inst)
{
    SolverConfig c;
    c.instance = inst;
    c.max_iters = 200000;
    c.gap_tol = 1e-13;
    c.power_iters = 500;
    return c;
}

// Collects every report so per-iteration invariants can be inspected.
struct Recorder {
    std::vector<IterationReport> reports;
    ReportSink sink()
    {
        return [this](const IterationReport& r) { reports.push_back(r); };
    }
};

} // namespace

TEST_SUITE("solvers") {

TEST_CASE("least squares matches the normal-equations oracle")
{
    const FanBeamProjector a = tiny_projector();
    const Eigen::MatrixXd m = testing::to_eigen(a);
    REQUIRE(Eigen::FullPivLU<Eigen::MatrixXd>(m).rank() == 16);

    std::mt19937_64 rng(8);
    const Image truth(4, 4, testing::random_vector(rng, 16, 0.5, 1.5));
    Sinogram g = a.project(truth);
    for (double& v : g.values()) {
        v += 0.01 * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    }
    const Eigen::VectorXd want = testing::least_squares(m, testing::to_eigen({g.values().begin(), g.values().end()}));

    const SolveResult r = solve_ls(g, a, tight(Instance::LS));
    CHECK(r.converged);
    CHECK(rmse(r.u.values(), testing::from_eigen(want)) <= 1e-6);
}

TEST_CASE("nonnegative least squares matches the active-set oracle")
{
    const FanBeamProjector a = tiny_projector();
    const Eigen::MatrixXd m = testing::to_eigen(a);
    std::mt19937_64 rng(9);
    // a target with negative pixels makes several constraints active
    const Image truth(4, 4, testing::random_vector(rng, 16, -0.4, 1.0));
    const Sinogram g = a.project(truth);
    const Eigen::VectorXd ge = testing::to_eigen({g.values().begin(), g.values().end()});
    const Eigen::VectorXd want = testing::nnls(m, ge);

    int active = 0;
    for (Eigen::Index j = 0; j < want.size(); ++j) {
        active += want(j) == 0.0;
    }
    REQUIRE(active > 0);
    REQUIRE(active < 16);
    // KKT check of the oracle itself
    const Eigen::VectorXd w = m.transpose() * (m * want - ge);
    for (Eigen::Index j = 0; j < want.size(); ++j) {
        CHECK(w(j) >= -1e-9);
        if (want(j) > 0.0) {
            CHECK(std::abs(w(j)) <= 1e-9);
        }
    }

    const SolveResult r = solve_ls_nonneg(g, a, tight(Instance::LSNonNeg));
    CHECK(rmse(r.u.values(), testing::from_eigen(want)) <= 1e-5);
    for (double v : r.u.values()) {
        CHECK(v >= 0.0);
    }
}

TEST_CASE("TV instances converge on a small phantom")
{
    const FanBeamProjector a(testing::small_geometry(32, 30, 64, 0.04));
    PhantomSpec ps;
    ps.m = 32;
    const Sinogram g = a.project(make_phantom(ps));
    for (Instance inst : {Instance::L2TV, Instance::KLTV}) {
        CAPTURE(instance_name(inst));
        SolverConfig c;
        c.instance = inst;
        c.lambda = 1e-3;
        c.max_iters = 20000;
        c.gap_tol = 1e-6;
        const SolveResult r = solve(a, 32, g, c);
        CHECK(r.converged);
        CHECK(std::abs(r.final_report.gap.conditional_gap) <= 1e-6);
    }
}

TEST_CASE("dual bounds hold exactly at every iteration")
{
    const FanBeamProjector a(testing::small_geometry(16, 20, 32, 0.05));
    PhantomSpec ps;
    ps.m = 32;
    Image u = make_phantom(ps);
    Image small(16, 16);
    for (std::size_t j = 0; j < 16; ++j) {
        for (std::size_t i = 0; i < 16; ++i) {
            small(i, j) = u(2 * i, 2 * j);
        }
    }
    const Sinogram g = pos(add_poisson_noise(a.project(small), NoiseSpec{1e4, 3}));
    for (Instance inst : {Instance::L2TV, Instance::KLTV, Instance::L1TV, Instance::PrecondKLTV}) {
        CAPTURE(instance_name(inst));
        SolverConfig c;
        c.instance = inst;
        c.lambda = 1e-2;
        c.max_iters = 300;
        c.report_interval = 1;
        Recorder rec;
        solve(a, 16, g, c, rec.sink());
        REQUIRE(rec.reports.size() == 301);
        for (const IterationReport& r : rec.reports) {
            CHECK(r.gap.find("q_excess")->violation() == 0.0);
            if (const Residual* p = r.gap.find("p_excess")) {
                CHECK(p->violation() == 0.0);
            }
        }
    }
}

TEST_CASE("nonnegative image constraint")
{
    const FanBeamProjector a(testing::small_geometry(8, 12, 16, 0.1));
    std::mt19937_64 rng(12);
    const Sinogram g(12, 16, testing::random_vector(rng, 192, -1.0, 1.0));
    SolverConfig c;
    c.instance = Instance::L2TV;
    c.lambda = 1e-2;
    c.nonneg_images = true;
    c.max_iters = 50;
    const SolveResult r = solve(a, 8, g, c);
    for (double v : r.u.values()) {
        CHECK(v >= 0.0);
    }
    CHECK(r.final_report.gap.residuals[0].name == "dual_feasibility_min");
}

TEST_CASE("report schedule")
{
    const FanBeamProjector a(testing::small_geometry(8, 12, 16, 0.1));
    const Sinogram g(12, 16, 1.0);
    SolverConfig c;
    c.instance = Instance::L2TV;
    c.max_iters = 25;
    c.report_interval = 10;
    Recorder rec;
    const SolveResult r = solve(a, 8, g, c, rec.sink());
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 25);
    REQUIRE(rec.reports.size() == 4);
    CHECK(rec.reports[0].n == 0);
    CHECK(rec.reports[1].n == 10);
    CHECK(rec.reports[2].n == 20);
    CHECK(rec.reports[3].n == 25);
}

TEST_CASE("reruns are bit-identical")
{
    const FanBeamProjector a(testing::small_geometry(8, 12, 16, 0.1));
    std::mt19937_64 rng(13);
    const Sinogram g(12, 16, testing::random_vector(rng, 192, 0.0, 1.0));
    SolverConfig c;
    c.instance = Instance::KLTV;
    c.lambda = 1e-3;
    c.max_iters = 200;
    const SolveResult r1 = solve(a, 8, g, c);
    const SolveResult r2 = solve(a, 8, g, c);
    CHECK(r1.u == r2.u);
    CHECK(r1.p == r2.p);
}

TEST_CASE("preconditioner weights")
{
    // second column and second row of |K| sum to zero
    const DenseOperator k(3, 3, {1.0, 0.0, -2.0, 0.0, 0.0, 0.0, 4.0, 0.0, 1.0});
    const CpSteps s = preconditioned_steps(k);
    CHECK(s.sigma == std::vector<double>{1.0 / 3.0, 0.0, 0.2});
    CHECK(s.tau == std::vector<double>{0.2, 0.0, 1.0 / 3.0});
}

TEST_CASE("generic runner solves a least-squares problem with identity K")
{
    // min 1/2 ||x - g||^2: the solution is g itself
    const IdentityOperator k(3);
    const std::vector<double> g{1.0, -2.0, 0.5};
    DualResolvent dual = [&](std::span<double> w, std::span<const double> sigma) {
        prox_ls_dual_inplace(w, g, sigma);
    };
    PrimalResolvent primal = [](std::span<double>, std::span<const double>) {};
    CpOptions opts;
    opts.max_iters = 500;
    const CpResult r = run_generic_cp(k, dual, primal, CpSteps::uniform(k, 1.0, 1.0), opts);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.x[i] == doctest::Approx(g[i]).epsilon(1e-10));
    }
}

TEST_CASE("non-finite iterates raise a divergence error")
{
    const IdentityOperator k(2);
    DualResolvent dual = [](std::span<double> w, std::span<const double>) { w[0] = std::nan(""); };
    PrimalResolvent primal = [](std::span<double>, std::span<const double>) {};
    CpOptions opts;
    opts.max_iters = 5;
    CHECK_THROWS_AS(run_generic_cp(k, dual, primal, CpSteps::uniform(k, 1.0, 1.0), opts), DivergenceError);
}

TEST_CASE("configuration errors")
{
    const FanBeamProjector a(testing::small_geometry(8, 12, 16, 0.1));
    const Sinogram g(12, 16, 1.0);
    SolverConfig c;
    c.instance = Instance::KLTV;
    c.lambda = 0.0;
    CHECK_THROWS_AS(solve(a, 8, g, c), ParameterError);
    c.lambda = 1e-3;
    c.theta = 1.5;
    CHECK_THROWS_AS(solve(a, 8, g, c), ParameterError);
    c.theta = 1.0;
    Sinogram negative = g;
    negative(0, 0) = -1.0;
    CHECK_THROWS_AS(solve(a, 8, negative, c), ParameterError);
    c.instance = Instance::ConstrainedTV;
    c.epsilon = 0.0;
    CHECK_THROWS_AS(solve(a, 8, g, c), ParameterError);
    CHECK_THROWS_AS(solve(a, 8, Sinogram(3, 3), SolverConfig{}), ShapeError);
}

}
