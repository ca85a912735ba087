#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hembem/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace hembem;

namespace {

const Material kMat(5.0, 0.45);
const QuadratureOptions kQuad;

LawSpec zero_law()
{
    LawSpec s;
    s.pieces = {{0.0, 0.0, 0.0}};
    return s;
}

struct Problem {
    BoundaryMesh mesh;
    DofMap dofs;
    BemMatrices bem;
    SteklovOperator P;
    LoadFunctional F;
    RegularizedLaw law;
    Problem(BoundaryMesh m, std::vector<TractionSegment> t, LawSpec spec = zero_law())
        : mesh(std::move(m)), dofs(mesh), bem(assemble_bem(mesh, dofs, kMat)), P(bem, dofs),
          F(assemble_load(mesh, dofs, t)), law(std::move(spec), 1e-3) {}
    EstimatorInput input() const { return {mesh, dofs, bem, P, F, kMat, law, kQuad}; }
};

MultiplierSolution constant_multiplier(const BoundaryMesh& m, double value)
{
    MultiplierSolution s;
    s.space = coarsen_multiplier_space(m);
    s.coef = Eigen::VectorXd::Zero(s.space.dof_count());
    const auto off = s.space.offsets();
    for (int i = 0; i < s.space.size(); ++i)
        s.coef(off[i]) = value;
    return s;
}

double sum(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

} // namespace

TEST_CASE("contact density")
{
    const ContactDensity d = contact_density(-1.0, 1.0, 1.0, 1.0);
    CHECK(d.penetration == 0.0);
    CHECK(d.consistency == 0.0);
    CHECK(d.complementarity == 1.0);

    const ContactDensity pen = contact_density(0.5, -2.0, 0.25, 2.0);
    CHECK(pen.penetration == doctest::Approx(8.0 * 0.25));
    CHECK(pen.consistency == doctest::Approx(0.125 * 4.0));
    CHECK(pen.complementarity == 0.0);
    const ContactDensity printed = contact_density(0.5, -2.0, 0.25, 2.0, NormScaling::Printed);
    CHECK(printed.penetration == doctest::Approx(0.125 * 0.25));
    CHECK(printed.consistency == doctest::Approx(8.0 * 4.0));
}

TEST_CASE("zero data give zero bubble indicators")
{
    const Problem pb(build_benchmark_mesh(4), {{Vec2(0.5, 0.0), Vec2(0.5, 0.5), Vec2(0.0, 0.0)}});
    const Eigen::VectorXd u = Eigen::VectorXd::Zero(pb.dofs.n_reduced());
    const auto eta = bubble_estimate(pb.input(), u, constant_multiplier(pb.mesh, 0.0));
    REQUIRE(static_cast<int>(eta.size()) == pb.mesh.size());
    for (double x : eta)
        CHECK(x == 0.0);
}

TEST_CASE("bubble indicators shrink when the solution lives on the enriched space")
{
    const BoundaryMesh coarse = build_benchmark_mesh(4);
    std::vector<std::pair<int, Refinement>> all;
    for (int e = 0; e < coarse.size(); ++e)
        all.emplace_back(e, Refinement::P);
    const Problem c(coarse, {benchmark_traction()});
    const Problem f(refine(coarse, all), {benchmark_traction()});
    const Eigen::VectorXd uc = c.P.matrix().ldlt().solve(c.F.F);
    const Eigen::VectorXd uf = f.P.matrix().ldlt().solve(f.F.F);
    const double ec = sum(bubble_estimate(c.input(), uc, constant_multiplier(c.mesh, 0.0)));
    const double ef = sum(bubble_estimate(f.input(), uf, constant_multiplier(f.mesh, 0.0)));
    CHECK(ec > 0.0);
    CHECK(ef < 0.5 * ec);

    // the coarse indicator is comparable to the energy of the enrichment
    const Eigen::VectorXd up = prolongate_reduced(c.mesh, c.dofs, uc, f.mesh, f.dofs);
    const double diff = std::pow(energy_norm(f.P.matrix(), uf - up), 2);
    MESSAGE("bubble " << ec << " energy of the enrichment " << diff);
    CHECK(ec > 0.1 * diff);
    CHECK(ec < 10.0 * diff);
}

TEST_CASE("contact indicators")
{
    const Problem pb(build_benchmark_mesh(4), {benchmark_traction()}, benchmark_law());
    const int n = pb.dofs.n_reduced();
    // lift the contact side: u_n < 0 everywhere is feasible
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i)
        u(i) = (pb.dofs.full_of_reduced()[i] % 2 == 1) ? 0.01 : 0.0;
    const double big = 1.0; // far above every slope of the law
    const auto ind = contact_indicators(pb.input(), u, constant_multiplier(pb.mesh, big));
    for (const auto& r : ind) {
        CHECK(r.penetration == 0.0);
        CHECK(r.consistency == 0.0);
        if (pb.mesh.elements[r.element].part != Part::Contact)
            CHECK(r.complementarity == 0.0);
    }
    // lambda - S_x = 1 - S_x(-0.01) and opening 0.01 on the contact elements away from the clamp
    const double expected = (big - pb.law.deriv(-0.01)) * 0.01;
    for (int e = 1; e < pb.mesh.size(); ++e)
        if (pb.mesh.elements[e].part == Part::Contact)
            CHECK(ind[e].complementarity == doctest::Approx(expected * pb.mesh.length(e)));

    // pushing into the obstacle is reported as penetration
    const auto pushed = contact_indicators(pb.input(), -u, constant_multiplier(pb.mesh, big));
    CHECK(pushed[1].penetration == doctest::Approx(1e-4));
}

TEST_CASE("total estimate")
{
    CHECK(total_estimate({}).total == 0.0);
    IndicatorRecord one{3, 0.1, 0.2, 0.3, 0.4};
    const EstimateTotals t1 = total_estimate({one});
    CHECK(t1.total == doctest::Approx(1.0));
    CHECK(t1.consistency == doctest::Approx(0.3));

    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<IndicatorRecord> recs(50);
    for (int i = 0; i < 50; ++i)
        recs[i] = {i, u(rng), u(rng), u(rng), u(rng)};
    const EstimateTotals t = total_estimate(recs);
    std::shuffle(recs.begin(), recs.end(), rng);
    double s = 0.0, sb = 0.0;
    for (const auto& r : recs) {
        s += r.total();
        sb += r.bubble;
    }
    CHECK(t.total == doctest::Approx(s).epsilon(1e-13));
    CHECK(t.bubble == doctest::Approx(sb).epsilon(1e-13));
}
