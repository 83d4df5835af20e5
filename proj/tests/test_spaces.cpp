#include "doctest.h"

#include <cmath>
#include <limits>

#include "pdct/error.hpp"
#include "pdct/spaces.hpp"

using namespace pdct;

TEST_SUITE("spaces") {

TEST_CASE("pixel indexing is row-major with i along s")
{
    Image u(3, 2);
    u(2, 1) = 5.0;
    CHECK(u.values()[1 * 3 + 2] == 5.0);
    CHECK(u.width() == 3);
    CHECK(u.height() == 2);

    Sinogram g(4, 7);
    g(3, 6) = 1.5;
    CHECK(g.values().back() == 1.5);
}

TEST_CASE("vector field components share one buffer, s first")
{
    Image s(2, 2, 1.0);
    Image t(2, 2, 2.0);
    VectorField v(s, t);
    CHECK(v.size() == 8);
    CHECK(v.values()[3] == 1.0);
    CHECK(v.values()[4] == 2.0);
    CHECK(v.s_image() == s);
    CHECK(v.t_image() == t);
    CHECK_THROWS_AS(VectorField(Image(2, 2), Image(3, 2)), ShapeError);
}

TEST_CASE("norms and inner products")
{
    Image a(2, 1, std::vector<double>{3.0, -4.0});
    Image b(2, 1, std::vector<double>{1.0, 2.0});
    const Norms n = norms(a);
    CHECK(n.l1 == 7.0);
    CHECK(n.l2 == 5.0);
    CHECK(n.linf == 4.0);
    CHECK(inner_product(a, b) == -5.0);
    CHECK_THROWS_AS(inner_product(a, Image(1, 2)), ShapeError);
}

TEST_CASE("vector field magnitude")
{
    VectorField v(Image(1, 1, std::vector<double>{3.0}), Image(1, 1, std::vector<double>{4.0}));
    CHECK(magnitude(v)(0, 0) == 5.0);
}

TEST_CASE("arithmetic checks shapes")
{
    Sinogram a(2, 3, 1.0);
    Sinogram b(2, 3, 2.0);
    Sinogram c = a + 2.0 * b;
    CHECK(c(1, 2) == 5.0);
    CHECK((c - a)(0, 0) == 4.0);
    Sinogram wrong(3, 2);
    CHECK_THROWS_AS(a += wrong, ShapeError);
}

TEST_CASE("finiteness scan")
{
    std::vector<double> v{1.0, 2.0};
    CHECK(all_finite(v));
    v[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(all_finite(v));
}

}
