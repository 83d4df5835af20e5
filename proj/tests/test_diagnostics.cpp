#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "pdct/convex.hpp"
#include "pdct/diagnostics.hpp"
#include "pdct/fan_beam.hpp"
#include "pdct/gradient.hpp"
#include "support.hpp"

using namespace pdct;

namespace {

double half_sq(const Sinogram& g)
{
    double s = 0.0;
    for (double v : g.values()) {
        s += 0.5 * v * v;
    }
    return s;
}

void check_identity(const GapBreakdown& b)
{
    double primal = 0.0;
    double dual = 0.0;
    for (const auto& t : b.primal_terms) {
        primal += t.value;
    }
    for (const auto& t : b.dual_terms) {
        dual += t.value;
    }
    CHECK(b.primal == primal);
    CHECK(b.dual == dual);
    CHECK(b.conditional_gap == b.primal - b.dual);
}

} // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("gaps at the zero start")
{
    const FanBeamProjector a(testing::small_geometry(8, 10, 16, 0.1));
    std::mt19937_64 rng(1);
    const Sinogram g(10, 16, testing::random_vector(rng, 160, 0.0, 2.0));
    const Image u = Image::square(8);
    const Sinogram p(10, 16);
    const VectorField q(8, 8);

    const GapBreakdown ls = gap_ls(u, p, g, a);
    CHECK(ls.conditional_gap == doctest::Approx(half_sq(g)));
    check_identity(ls);

    const GapBreakdown l2 = gap_l2tv(u, p, q, g, a, 0.3);
    CHECK(l2.conditional_gap == doctest::Approx(half_sq(g)));
    check_identity(l2);
    CHECK(l2.residuals.size() == 2);
    CHECK(l2.residuals[0].name == "dual_feasibility");

    const GapBreakdown kl = gap_kltv(u, p, q, g, a, 0.3);
    check_identity(kl);
    CHECK(kl.find("p_excess") != nullptr);
    CHECK(kl.find("projection_min") != nullptr);
    CHECK(kl.find("q_excess") != nullptr);
}

TEST_CASE("zero data gives a zero LS gap")
{
    const FanBeamProjector a(testing::small_geometry(4, 6, 8, 0.1));
    const GapBreakdown b = gap_ls(Image::square(4), Sinogram(6, 8), Sinogram(6, 8), a);
    CHECK(b.conditional_gap == 0.0);
}

TEST_CASE("LS gap vanishes at the normal-equations solution")
{
    const FanBeamProjector a(testing::small_geometry(4, 36, 12, 0.1));
    const DenseOperator dense = DenseOperator::materialize(a);
    Eigen::MatrixXd m(dense.range_size(), dense.domain_size());
    for (std::size_t r = 0; r < dense.range_size(); ++r) {
        for (std::size_t c = 0; c < dense.domain_size(); ++c) {
            m(r, c) = dense(r, c);
        }
    }
    std::mt19937_64 rng(2);
    const auto gv = testing::random_vector(rng, dense.range_size(), 0.0, 1.0);
    const Eigen::VectorXd ge = Eigen::Map<const Eigen::VectorXd>(gv.data(), gv.size());
    const Eigen::VectorXd ue = (m.transpose() * m).ldlt().solve(m.transpose() * ge);
    const Eigen::VectorXd pe = m * ue - ge;

    const Image u(4, 4, std::vector<double>(ue.data(), ue.data() + ue.size()));
    const Sinogram p(36, 12, std::vector<double>(pe.data(), pe.data() + pe.size()));
    const Sinogram g(36, 12, gv);
    const GapBreakdown b = gap_ls(u, p, g, a);
    CHECK(std::abs(b.conditional_gap) <= 1e-8);
    CHECK(b.residuals[0].value <= 1e-10);
}

TEST_CASE("constant image with matching data: the gap is the boundary TV")
{
    const FanBeamProjector a(testing::small_geometry(6, 8, 12, 0.1));
    const Image u = Image::square(6, 1.5);
    const Sinogram g = a.project(u);
    const double lambda = 0.2;
    const GapBreakdown b = gap_l2tv(u, Sinogram(8, 12), VectorField(6, 6), g, a, lambda);
    // border pixels on the last column and row have one difference of -1.5,
    // the far corner has two
    const double tv = 10 * 1.5 + 1.5 * std::sqrt(2.0);
    CHECK(b.conditional_gap == doctest::Approx(lambda * tv).epsilon(1e-12));
}

TEST_CASE("KL divergence")
{
    std::mt19937_64 rng(3);
    SUBCASE("equality gives zero")
    {
        const auto v = testing::random_vector(rng, 50, 0.1, 3.0);
        CHECK(kl_divergence(v, v) == doctest::Approx(0.0).scale(1.0));
    }
    SUBCASE("zero data reduces to the sum of projections")
    {
        const auto au = testing::random_vector(rng, 50, 0.0, 3.0);
        double sum = 0.0;
        for (double v : au) {
            sum += v;
        }
        CHECK(kl_divergence(au, std::vector<double>(50, 0.0)) == doctest::Approx(sum));
    }
    SUBCASE("nonnegative on random pairs")
    {
        for (int n = 0; n < 1000; ++n) {
            const auto au = testing::random_vector(rng, 5, 1e-3, 5.0);
            const auto g = testing::random_vector(rng, 5, 0.0, 5.0);
            CHECK(kl_divergence(au, g) >= 0.0);
        }
    }
}

TEST_CASE("residual violation directions")
{
    CHECK(Residual{"a", -0.5, Bound::AtMost, 0.0}.violation() == 0.0);
    CHECK(Residual{"a", 0.5, Bound::AtMost, 0.0}.violation() == 0.5);
    CHECK(Residual{"a", -0.5, Bound::AtLeast, 0.0}.violation() == 0.5);
    CHECK(Residual{"a", -0.5, Bound::Zero, 0.0}.violation() == 0.5);
}

TEST_CASE("stopping test honours gating residuals")
{
    GapBreakdown b;
    b.primal_terms.push_back({"tv", 1.0});
    b.dual_terms.push_back({"data", 1.0});
    b.residuals.push_back({"dual_feasibility", 3.0, Bound::Zero, 0.0});
    b.finalize();
    CHECK(b.converged(1e-5));
    b.residuals.push_back({"data_ball_excess", 1e-3, Bound::AtMost, 0.0, true});
    CHECK_FALSE(b.converged(1e-5));
    CHECK(b.converged(1e-2));
}

TEST_CASE("constrained TV reports the data-ball excess")
{
    const FanBeamProjector a(testing::small_geometry(4, 6, 8, 0.1));
    const Sinogram g(6, 8, 1.0);
    const GapBreakdown b = gap_constrained_tv(Image::square(4), Sinogram(6, 8), VectorField(4, 4), g, a, 2.0);
    const Residual* r = b.find("data_ball_excess");
    REQUIRE(r != nullptr);
    CHECK(r->value == doctest::Approx(std::sqrt(48.0) - 2.0));
    CHECK(r->gates_stop);
    CHECK(b.conditional_gap == 0.0);
}

TEST_CASE("csv rows")
{
    IterationReport r;
    r.n = 7;
    r.gap.primal_terms.push_back({"data", 2.0});
    r.gap.dual_terms.push_back({"data", 0.5});
    r.gap.residuals.push_back({"dual_feasibility", 0.25, Bound::Zero, 0.0});
    r.gap.finalize();
    const std::string row = csv_row(r);
    CHECK(row.rfind("7,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(kCsvHeader.begin(), kCsvHeader.end(), ','));
}

}
