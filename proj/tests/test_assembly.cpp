#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hembem/assembly.hpp"
#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

using namespace hembem;

namespace {

const Material kMat(5.0, 0.45);

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::VectorXd rigid(const DofMap& d, int k)
{
    return interpolate_full(d, [k](const Vec2& x) {
        if (k == 0)
            return Vec2(1.0, 0.0);
        if (k == 1)
            return Vec2(0.0, 1.0);
        return Vec2(-x.y(), x.x());
    });
}

// Tensor Gauss on two disjoint segments, doubled until the value stagnates.
double oracle_V00(const BoundaryMesh& m, int ex, int ey)
{
    double prev = 0.0;
    for (int n = 8; n <= 512; n *= 2) {
        const QuadratureRule& q = gauss_legendre(n);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Vec2 x = m.point(ex, q.points[i]);
                const Vec2 y = m.point(ey, q.points[j]);
                s += q.weights[i] * q.weights[j] * fundamental_solution(x, y, kMat)(0, 0);
            }
        s *= 0.25 * m.length(ex) * m.length(ey);
        if (n > 8 && std::abs(s - prev) < 1e-13)
            return s;
        prev = s;
    }
    return prev;
}

} // namespace

TEST_CASE("V is symmetric and positive definite")
{
    for (int n0 : {1, 4, 16}) {
        const BoundaryMesh m = build_benchmark_mesh(n0);
        const DofMap d(m);
        const Eigen::MatrixXd V = assemble_V(m, d.density(), d.density(), kMat);
        CHECK(max_abs(V - V.transpose()) <= 1e-12 * max_abs(V));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (V + V.transpose()));
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("V entry for constants on disjoint segments")
{
    const BoundaryMesh m = build_benchmark_mesh(1);
    const DofMap d(m);
    const Eigen::MatrixXd V = assemble_V(m, d.density(), d.density(), kMat);
    // bottom (element 0) against top (element 2), first component constants
    const double v = V(d.density().map[0][0], d.density().map[2][0]);
    CHECK(v == doctest::Approx(oracle_V00(m, 0, 2)).epsilon(1e-10));
}

TEST_CASE("W and the Calderon projector annihilate rigid motions")
{
    double prev = 1e300;
    for (int n0 : {4, 8, 16}) {
        const BoundaryMesh m = build_benchmark_mesh(n0);
        const DofMap d(m);
        const BemMatrices bem = assemble_bem(m, d, kMat);
        CHECK(max_abs(bem.W - bem.W.transpose()) <= 1e-10 * max_abs(bem.W));
        double worst = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Eigen::VectorXd r = rigid(d, k);
            CHECK((bem.W * r).norm() <= 1e-8 * bem.W.norm());
            worst = std::max(worst, ((bem.K + 0.5 * bem.I) * r).norm());
        }
        CHECK(worst <= 1e-6);
        CHECK(worst <= prev);
        prev = worst;
    }
}

TEST_CASE("higher quadrature orders leave the entries unchanged")
{
    BoundaryMesh m = build_benchmark_mesh(2);
    m = refine(m, {{0, Refinement::P}, {3, Refinement::P}, {3, Refinement::P}});
    const DofMap d(m);
    const BemMatrices a = assemble_bem(m, d, kMat);
    QuadratureOptions hi;
    hi.regular_extra += 8;
    hi.singular_extra += 8;
    hi.angular_extra += 8;
    const BemMatrices b = assemble_bem(m, d, kMat, hi);
    CHECK(max_abs(a.V - b.V) <= 1e-9);
    CHECK(max_abs(a.K - b.K) <= 1e-9);
    CHECK(max_abs(a.W - b.W) <= 1e-9);
}

TEST_CASE("identity block is the mass pairing")
{
    const BoundaryMesh m = build_benchmark_mesh(1);
    const DofMap d(m);
    const Eigen::MatrixXd I = assemble_I(m, d.density(), d.full());
    // constant density against the sum of hats equals the element length
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d.n_full());
    const Eigen::VectorXd r = I * ones;
    for (int e = 0; e < m.size(); ++e)
        for (int c = 0; c < 2; ++c)
            CHECK(r(d.density().map[e][c]) == doctest::Approx(m.length(e)));
}

TEST_CASE("geometry scaling is checked")
{
    CHECK_NOTHROW(check_geometry_scaling(build_benchmark_mesh(1)));
    CHECK_THROWS_AS(check_geometry_scaling(scaled(build_benchmark_mesh(1), 4.0)), ConfigError);
}

TEST_CASE("matrix binary dump round trip")
{
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 4.5, -5, 1e-300;
    std::stringstream ss;
    write_matrix_binary(ss, m);
    const Eigen::MatrixXd r = read_matrix_binary(ss);
    CHECK(r.rows() == 2);
    CHECK(r.cols() == 3);
    CHECK((r - m).norm() == 0.0);

    std::stringstream bad("abc");
    CHECK_THROWS_AS(read_matrix_binary(bad), ConfigError);
}
