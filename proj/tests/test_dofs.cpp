#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hembem/dofs.hpp"
#include "hembem/quadrature.hpp"
#include "hembem/shape.hpp"

#include <random>
#include <set>

using namespace hembem;

TEST_CASE("dof counts on the benchmark mesh")
{
    const BoundaryMesh m = build_benchmark_mesh(2);
    const DofMap d(m);
    // 8 vertices, two components each
    CHECK(d.n_full() == 16);
    // the Dirichlet side holds 3 vertices
    CHECK(d.n_reduced() == 10);
    // one constant per element and component
    CHECK(d.n_density() == 16);

    const BoundaryMesh mp = refine(m, {{0, Refinement::P}, {7, Refinement::P}});
    const DofMap dp(mp);
    CHECK(dp.n_full() == 20);
    CHECK(dp.n_reduced() == 12);
    CHECK(dp.n_density() == 20);
}

TEST_CASE("Lobatto basis is nodal and a partition of unity")
{
    for (int p = 1; p <= 8; ++p) {
        const LocalBasis b(ShapeFamily::Lobatto, p);
        REQUIRE(b.count() == p + 1);
        const auto x = gauss_lobatto_nodes(p);
        std::vector<double> v(p + 1), dv(p + 1);
        for (int k = 0; k <= p; ++k) {
            b.evaluate(x[k], v.data(), nullptr);
            for (int j = 0; j <= p; ++j)
                CHECK(v[j] == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12));
        }
        for (double xi : {-0.77, 0.1, 0.93}) {
            b.evaluate(xi, v.data(), dv.data());
            double s = 0.0, ds = 0.0;
            for (int j = 0; j <= p; ++j) {
                s += v[j];
                ds += dv[j];
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ds == doctest::Approx(0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("Lobatto derivatives match central differences")
{
    const LocalBasis b(ShapeFamily::Lobatto, 5);
    std::vector<double> v(6), d(6), vp(6), vm(6);
    const double xi = 0.31, h = 1e-6;
    b.evaluate(xi, v.data(), d.data());
    b.evaluate(xi + h, vp.data(), nullptr);
    b.evaluate(xi - h, vm.data(), nullptr);
    for (int j = 0; j < 6; ++j)
        CHECK(d[j] == doctest::Approx((vp[j] - vm[j]) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("bubble and mode families")
{
    const LocalBasis bub(ShapeFamily::Bubble, 2);
    CHECK(bub.count() == 1);
    CHECK(bub.polynomial_degree() == 3);
    double v;
    bub.evaluate(1.0, &v, nullptr);
    CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
    bub.evaluate(-1.0, &v, nullptr);
    CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
    bub.evaluate(0.4, &v, nullptr);
    CHECK(v == doctest::Approx(legendre(3, 0.4) - legendre(1, 0.4)));

    const LocalBasis mode(ShapeFamily::Mode, 3);
    mode.evaluate(0.2, &v, nullptr);
    CHECK(v == doctest::Approx(legendre(3, 0.2)));
}

TEST_CASE("interpolation and reduction round trip")
{
    const BoundaryMesh m = refine(build_benchmark_mesh(2), {{1, Refinement::P}, {2, Refinement::P}});
    const DofMap d(m);
    const auto u = interpolate_full(d, [](const Vec2& x) { return Vec2(x.x() + 2 * x.y(), x.x() * x.y()); });
    const Eigen::VectorXd r = restrict_to_reduced(d, u);
    const Eigen::VectorXd f = extend_to_full(d, r);
    for (int i = 0; i < d.n_full(); ++i) {
        if (d.reduced_of_full()[i] >= 0)
            CHECK(f(i) == u(i));
        else
            CHECK(f(i) == 0.0);
    }
}

TEST_CASE("every element maps to distinct dofs and shares endpoints with its neighbour")
{
    std::mt19937 rng(5);
    BoundaryMesh m = build_benchmark_mesh(2);
    for (int s = 0; s < 15; ++s) {
        std::uniform_int_distribution<int> pick(0, m.size() - 1);
        m = refine(m, {{pick(rng), (rng() % 2) ? Refinement::H : Refinement::P}});
        const DofMap d(m);
        for (int e = 0; e < m.size(); ++e) {
            const auto& map = d.full().map[e];
            std::set<int> uniq(map.begin(), map.end());
            CHECK(uniq.size() == map.size());
            const int next = (e + 1) % m.size();
            const auto& nm = d.full().map[next];
            CHECK(map[map.size() - 2] == nm[0]);
            CHECK(map[map.size() - 1] == nm[1]);
        }
        // reduced dofs are exactly the nodes off the closed Dirichlet side
        int off = 0;
        for (const Vec2& x : d.node_points())
            if (x.x() > 1e-14)
                off += 2;
        CHECK(d.n_reduced() == off);
    }
}
