#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hembem/adaptivity.hpp"
#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <cmath>
#include <random>

using namespace hembem;

namespace {

// Smallest subset reaching theta * total, by enumeration of all subsets.
int min_cardinality(const std::vector<double>& eta, double theta)
{
    const int n = static_cast<int>(eta.size());
    double total = 0.0;
    for (double x : eta)
        total += x;
    int best = n + 1;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double s = 0.0;
        int c = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                s += eta[i];
                ++c;
            }
        if (s >= theta * total)
            best = std::min(best, c);
    }
    return best;
}

} // namespace

TEST_CASE("doerfler marking examples")
{
    CHECK(doerfler_mark({0.9, 0.05, 0.05}, 0.3) == std::vector<int>{0});
    CHECK(doerfler_mark({0.0, 0.0}, 0.3).empty());
    const auto all = doerfler_mark({0.2, 0.0, 0.5, 0.3}, 0.999999);
    CHECK(all == std::vector<int>{2, 3, 0});

    // equal shares: ceil(0.3 N) elements
    for (int N : {7, 10, 33}) {
        const auto m = doerfler_mark(std::vector<double>(N, 1.0), 0.3);
        CHECK(static_cast<int>(m.size()) == static_cast<int>(std::ceil(0.3 * N - 1e-12)));
        CHECK(m.front() == 0);
    }
}

TEST_CASE("doerfler marking is minimal")
{
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> eta(10);
        for (double& x : eta)
            x = std::pow(u(rng), 3);
        const double theta = 0.05 + 0.9 * u(rng);
        const auto m = doerfler_mark(eta, theta);
        CHECK(static_cast<int>(m.size()) == min_cardinality(eta, theta));
        double total = 0.0, s = 0.0;
        for (double x : eta)
            total += x;
        for (int i : m)
            s += eta[i];
        CHECK(s >= theta * total);
    }
}

TEST_CASE("legendre coefficients")
{
    const auto a = legendre_coefficients([](double x) { return legendre(2, x); }, 4);
    REQUIRE(a.size() == 5);
    for (int i = 0; i < 5; ++i)
        CHECK(a[i] == doctest::Approx(i == 2 ? 1.0 : 0.0).scale(1.0).epsilon(1e-14));
    const auto one = legendre_coefficients([](double) { return 1.0; }, 3);
    CHECK(one[0] == doctest::Approx(1.0));
    CHECK(one[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    const auto x = legendre_coefficients([](double t) { return t; }, 2);
    CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("decay slope")
{
    std::vector<double> e(6), c(6, 0.7), two(8);
    for (int i = 0; i < 6; ++i)
        e[i] = std::exp(-i);
    CHECK(decay_slope(e).value() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(decay_slope(c).value() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> noise(-1e-16, 1e-16);
    for (int i = 0; i < 8; ++i)
        two[i] = std::pow(2.0, -i) + noise(rng);
    CHECK(decay_slope(two).value() == doctest::Approx(-std::log(2.0)).epsilon(1e-3));
    CHECK_FALSE(decay_slope({1.0}).has_value());
    CHECK_FALSE(decay_slope({1.0, 0.0, 1e-15}).has_value());
}

TEST_CASE("refinement decision")
{
    CHECK(decide_refinement({-1.0, -1.0}, 0.5) == Refinement::P);
    CHECK(decide_refinement({0.0, -1.0}, 0.5) == Refinement::H);
    CHECK(decide_refinement({std::nullopt, std::nullopt}, 0.5) == Refinement::P);
    CHECK(decide_refinement({std::nullopt, -3.0}, 0.5) == Refinement::P);
    CHECK(decide_refinement({std::log(0.5) + 1e-9}, 0.5) == Refinement::H);
}

TEST_CASE("element slopes see smooth and kinked traces")
{
    BoundaryMesh m = build_benchmark_mesh(2);
    for (int k = 0; k < 5; ++k)
        m = refine(m, {{2, Refinement::P}});
    const DofMap d(m);
    // an analytic field decays fast on the p = 6 element
    const Eigen::VectorXd smooth = restrict_to_reduced(
        d, interpolate_full(d, [](const Vec2& x) { return Vec2(std::exp(x.y()), std::cos(x.y())); }));
    const Eigen::VectorXd psi = Eigen::VectorXd::Zero(d.n_density());
    const auto s = element_slopes(m, d, smooth, psi, 2);
    REQUIRE(s.size() == 2);
    for (const auto& v : s) {
        REQUIRE(v.has_value());
        CHECK(std::exp(*v) <= 0.5);
    }
    // |y - 0.11| resolved only by the polynomial: slow decay
    const Eigen::VectorXd kink = restrict_to_reduced(
        d, interpolate_full(d, [](const Vec2& x) { return Vec2(std::abs(x.y() - 0.11), 0.0); }));
    const auto k = element_slopes(m, d, kink, psi, 2);
    CHECK(std::exp(k[0].value()) > 0.5);
}

TEST_CASE("plan refinement")
{
    const BoundaryMesh m = build_benchmark_mesh(2);
    const DofMap d(m);
    const Eigen::VectorXd u = Eigen::VectorXd::Zero(d.n_reduced());
    const Eigen::VectorXd psi = Eigen::VectorXd::Zero(d.n_density());
    std::vector<IndicatorRecord> ind(m.size());
    for (int e = 0; e < m.size(); ++e)
        ind[e] = {e, e == 5 ? 1.0 : 0.01, 0, 0, 0};

    AdaptiveConfig cfg;
    cfg.mode = AdaptiveMode::Uniform;
    const auto uni = plan_refinement(m, d, u, psi, ind, cfg);
    CHECK(static_cast<int>(uni.size()) == m.size());
    for (const auto& [e, r] : uni)
        CHECK(r == Refinement::H);

    cfg.mode = AdaptiveMode::H;
    const auto h = plan_refinement(m, d, u, psi, ind, cfg);
    REQUIRE(h.size() == 1);
    CHECK(h[0].first == 5);
    CHECK(h[0].second == Refinement::H);

    // p = 1 with a zero trace has no usable coefficients: p-refine
    cfg.mode = AdaptiveMode::HP;
    const auto hp = plan_refinement(m, d, u, psi, ind, cfg);
    REQUIRE(hp.size() == 1);
    CHECK(hp[0].second == Refinement::P);

    cfg.theta = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
