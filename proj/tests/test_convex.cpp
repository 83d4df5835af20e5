#include "doctest.h"

#include <cmath>
#include <random>

#include "convex_oracles.hpp"
#include "pdct/convex.hpp"
#include "pdct/error.hpp"

using namespace pdct;

namespace {

constexpr int kCases = 1000;
constexpr double kProxTol = 1e-6;

} // namespace

TEST_SUITE("convex") {

TEST_CASE("least-squares dual prox matches brute force")
{
    CHECK(testing::check_prox_ls(kCases, 1).worst <= kProxTol);
}

TEST_CASE("KL dual prox matches brute force and stays below 1")
{
    const testing::ProxCheck r = testing::check_prox_kl(kCases, 2);
    CHECK(r.worst <= kProxTol);
    CHECK(r.bound_held);
}

TEST_CASE("KL dual prox stays below 1 for tiny data")
{
    std::vector<double> y{1e8, 1.0 - 1e-17, 0.999999};
    const std::vector<double> g{1e-300, 1e-20, 0.0};
    prox_kl_dual_inplace(y, g, std::vector<double>(3, 1.0));
    for (double p : y) {
        CHECK(p <= 1.0);
    }
}

TEST_CASE("L1 dual prox matches brute force")
{
    const testing::ProxCheck r = testing::check_prox_l1(kCases, 3);
    CHECK(r.worst <= kProxTol);
    CHECK(r.active > 0);
}

TEST_CASE("ball dual prox matches brute force")
{
    const testing::ProxCheck r = testing::check_prox_ball(kCases, 4);
    CHECK(r.worst <= kProxTol);
    // both branches of the shrinkage were exercised
    CHECK(r.active > 0);
    CHECK(r.active < kCases);
}

TEST_CASE("TV dual prox matches brute force")
{
    const testing::ProxCheck r = testing::check_prox_tv(kCases, 5);
    CHECK(r.worst <= kProxTol);
    CHECK(r.bound_held);
    CHECK(r.active > 0);
}

TEST_CASE("TV dual prox keeps magnitudes within the bound exactly")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> val(-1e3, 1e3);
    std::uniform_real_distribution<double> lam(1e-6, 1.0);
    for (int n = 0; n < 100000; ++n) {
        const double l = lam(rng);
        std::vector<double> s{val(rng)};
        std::vector<double> t{val(rng)};
        prox_tv_dual_inplace(s, t, l);
        REQUIRE(std::hypot(s[0], t[0]) <= l);
    }
}

TEST_CASE("pos projection")
{
    Image u(3, 1, std::vector<double>{-1.0, 0.0, 2.0});
    CHECK(pos(u) == Image(3, 1, std::vector<double>{0.0, 0.0, 2.0}));
}

TEST_CASE("prox wrappers validate their arguments")
{
    const Sinogram y(2, 2);
    CHECK_THROWS_AS(prox_ls_dual(y, Sinogram(2, 3), 1.0), ShapeError);
    CHECK_THROWS_AS(prox_tv_dual(VectorField(2, 2), 0.0), ParameterError);
}

TEST_CASE("closed-form conjugates match the Legendre oracle and biconjugate back")
{
    for (const testing::ConjugateCheck& c : testing::check_conjugates(1e-4)) {
        CAPTURE(c.name);
        CHECK(c.worst_conjugate <= c.tolerance);
        CHECK(c.worst_biconjugate <= c.tolerance);
    }
}

TEST_CASE("Legendre oracle on a quadratic")
{
    // f(x) = x^2 / 2 is its own conjugate
    const auto xs = testing::uniform_grid(-10.0, 10.0, 1e-3);
    std::vector<double> f;
    for (double x : xs) {
        f.push_back(0.5 * x * x);
    }
    CHECK(legendre_1d(xs, f, 1.5) == doctest::Approx(1.125).epsilon(1e-6));
}

TEST_CASE("conjugate finite parts")
{
    const std::vector<double> g{0.0, 2.0};
    const std::vector<double> p{0.5, 0.5};
    CHECK(conjugate_kl(p, g) == doctest::Approx(-2.0 * std::log(0.5)));
    const double b = conjugate_ball(std::vector<double>{3.0, 4.0}, std::vector<double>{1.0, 1.0}, 0.5);
    CHECK(b == doctest::Approx(0.5 * 5.0 + 7.0));
}

}
