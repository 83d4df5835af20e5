#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "pdct/error.hpp"
#include "pdct/fan_beam.hpp"
#include "pdct/gradient.hpp"
#include "pdct/power_method.hpp"
#include "support.hpp"

using namespace pdct;

namespace {

double svd_norm(const DenseOperator& k)
{
    Eigen::MatrixXd m(k.range_size(), k.domain_size());
    for (std::size_t r = 0; r < k.range_size(); ++r) {
        for (std::size_t c = 0; c < k.domain_size(); ++c) {
            m(r, c) = k(r, c);
        }
    }
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

} // namespace

TEST_SUITE("power_method") {

TEST_CASE("identity has norm 1")
{
    const PowerMethodResult r = power_method(IdentityOperator(16));
    CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diagonal operator")
{
    const DenseOperator k(2, 2, {3.0, 0.0, 0.0, 1.0});
    const PowerMethodResult r = power_method(k, {.max_iters = 200, .rel_tol = 0.0});
    CHECK(r.norm == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r.iterations == 200);
    CHECK(r.trace.size() == 200);
}

TEST_CASE("random dense operators match the SVD oracle")
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> rows(2, 48);
    for (int n = 0; n < 40; ++n) {
        const std::size_t r = rows(rng);
        const std::size_t c = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(r, 32))(rng);
        const DenseOperator k(r, c, testing::random_vector(rng, r * c));
        const double want = svd_norm(k);
        const PowerMethodResult got = power_method(k, {.max_iters = 20000, .rel_tol = 1e-15});
        CHECK(got.norm == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("stacked projector and gradient against the SVD oracle")
{
    const FanBeamProjector a(testing::small_geometry(6, 12, 16, 0.12));
    const GradientOperator grad(6);
    const StackedOperator k(a, grad);
    const PowerMethodResult got = power_method(k, {.max_iters = 20000, .rel_tol = 1e-15});
    CHECK(got.norm == doctest::Approx(svd_norm(DenseOperator::materialize(k))).epsilon(1e-8));
}

TEST_CASE("trace is nondecreasing")
{
    std::mt19937_64 rng(4);
    const DenseOperator k(20, 10, testing::random_vector(rng, 200));
    const PowerMethodResult r = power_method(k, {.max_iters = 60, .rel_tol = 0.0});
    for (std::size_t n = 1; n < r.trace.size(); ++n) {
        CHECK(r.trace[n] >= r.trace[n - 1] * (1.0 - 1e-14));
    }
}

TEST_CASE("errors")
{
    const DenseOperator k(2, 2, {1.0, 0.0, 0.0, 1.0});
    const std::vector<double> zero(2, 0.0);
    CHECK_THROWS_AS(power_method(k, zero), ParameterError);
    const DenseOperator null(3, 2, std::vector<double>(6, 0.0));
    CHECK_THROWS_AS(power_method(null), DegenerateOperatorError);
    CHECK_THROWS_AS(power_method(k, {.max_iters = 0}), ParameterError);
}

}
