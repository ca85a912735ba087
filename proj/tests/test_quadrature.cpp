#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <cmath>

using namespace hembem;

namespace {

double integrate(const QuadratureRule& q, int k)
{
    double s = 0.0;
    for (int i = 0; i < q.size(); ++i)
        s += q.weights[i] * std::pow(q.points[i], k);
    return s;
}

// Root of f in [a,b] by plain bisection, used as an independent oracle.
template <class F>
double bisect(F f, double a, double b)
{
    double fa = f(a);
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

TEST_CASE("gauss_legendre is exact up to degree 2n-1")
{
    for (int n = 1; n <= 20; ++n) {
        const QuadratureRule& q = gauss_legendre(n);
        REQUIRE(q.size() == n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
            CHECK(integrate(q, k) == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("mapped gauss_legendre integrates on [a,b]")
{
    const QuadratureRule q = gauss_legendre(4, 1.0, 3.0);
    double s = 0.0;
    for (int i = 0; i < q.size(); ++i)
        s += q.weights[i] * q.points[i] * q.points[i] * q.points[i];
    CHECK(s == doctest::Approx((81.0 - 1.0) / 4.0).epsilon(1e-14));
}

TEST_CASE("gauss_log integrates x^k (-log x) on (0,1)")
{
    for (int n : {1, 2, 5, 10, 20}) {
        const QuadratureRule& q = gauss_log(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            const double exact = 1.0 / ((k + 1.0) * (k + 1.0));
            CHECK(integrate(q, k) == doctest::Approx(exact).epsilon(1e-12));
        }
        for (int i = 0; i < q.size(); ++i) {
            CHECK(q.points[i] > 0.0);
            CHECK(q.points[i] < 1.0);
            CHECK(q.weights[i] > 0.0);
        }
    }
}

TEST_CASE("legendre polynomials")
{
    for (double x : {-1.0, -0.3, 0.0, 0.55, 1.0}) {
        CHECK(legendre(0, x) == 1.0);
        CHECK(legendre(1, x) == doctest::Approx(x));
        CHECK(legendre(3, x) == doctest::Approx(0.5 * (5 * x * x * x - 3 * x)));
        double v, d;
        legendre_with_derivative(4, x, v, d);
        CHECK(v == doctest::Approx((35 * std::pow(x, 4) - 30 * x * x + 3) / 8));
        CHECK(d == doctest::Approx((140 * std::pow(x, 3) - 60 * x) / 8));
    }
    CHECK(legendre(7, 1.0) == doctest::Approx(1.0));
    CHECK(legendre(7, -1.0) == doctest::Approx(-1.0));
}

TEST_CASE("gauss_lobatto_nodes examples")
{
    auto p1 = gauss_lobatto_nodes(1);
    REQUIRE(p1.size() == 2);
    CHECK(p1[0] == -1.0);
    CHECK(p1[1] == 1.0);

    auto p2 = gauss_lobatto_nodes(2);
    REQUIRE(p2.size() == 3);
    CHECK(p2[1] == doctest::Approx(0.0).epsilon(1e-15));

    // interior nodes of p = 4 are the roots of L4'(x) = (140 x^3 - 60 x) / 8
    auto dL4 = [](double x) { return (140 * x * x * x - 60 * x) / 8; };
    const double r = bisect(dL4, 0.2, 0.9);
    auto p4 = gauss_lobatto_nodes(4);
    REQUIRE(p4.size() == 5);
    CHECK(p4[0] == -1.0);
    CHECK(p4[1] == doctest::Approx(-r).epsilon(1e-14));
    CHECK(p4[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p4[3] == doctest::Approx(std::sqrt(3.0 / 7.0)).epsilon(1e-14));
    CHECK(p4[4] == 1.0);

    CHECK_THROWS_AS(gauss_lobatto_nodes(0), DomainError);
}

TEST_CASE("gauss_lobatto_nodes properties")
{
    for (int p = 1; p <= 12; ++p) {
        const auto x = gauss_lobatto_nodes(p);
        REQUIRE(static_cast<int>(x.size()) == p + 1);
        CHECK(x.front() == -1.0);
        CHECK(x.back() == 1.0);
        for (int i = 0; i < p; ++i)
            CHECK(x[i] < x[i + 1]);
        for (int i = 0; i <= p; ++i)
            CHECK(x[i] == doctest::Approx(-x[p - i]).epsilon(1e-14));
        // Lobatto weights 2/(p(p+1) L_p^2) make the rule exact to degree 2p-1
        for (int k = 0; k <= 2 * p - 1; ++k) {
            double s = 0.0;
            for (double xi : x)
                s += 2.0 / (p * (p + 1.0) * std::pow(legendre(p, xi), 2)) * std::pow(xi, k);
            CHECK(s == doctest::Approx((k % 2) ? 0.0 : 2.0 / (k + 1)).epsilon(1e-12));
        }
    }
}
