#include "hembem/adaptivity.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"
#include "hembem/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hembem {

void AdaptiveConfig::validate() const
{
    if (!(theta > 0.0 && theta < 1.0))
        throw ConfigError("theta must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw ConfigError("delta must lie in (0,1)");
    if (max_iterations < 1 || max_dof < 1)
        throw ConfigError("iteration and dof limits must be positive");
}

std::vector<int> doerfler_mark(const std::vector<double>& indicators, double theta)
{
    double total = 0.0;
    for (double v : indicators) {
        if (!(v >= 0.0))
            throw DomainError("doerfler_mark: indicators must be nonnegative");
        total += v;
    }
    if (total <= 0.0)
        return {};
    std::vector<int> order(indicators.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return indicators[a] > indicators[b]; });
    std::vector<int> marked;
    double sum = 0.0;
    for (int e : order) {
        if (sum >= theta * total)
            break;
        marked.push_back(e);
        sum += indicators[e];
    }
    return marked;
}

std::vector<double> legendre_coefficients(const std::function<double(double)>& v, int p)
{
    if (p < 0)
        throw DomainError("legendre_coefficients: negative degree");
    const QuadratureRule& q = gauss_legendre(p + 9);
    std::vector<double> a(p + 1, 0.0);
    for (int k = 0; k < q.size(); ++k) {
        const double f = v(q.points[k]);
        for (int i = 0; i <= p; ++i)
            a[i] += q.weights[k] * f * legendre(i, q.points[k]);
    }
    for (int i = 0; i <= p; ++i)
        a[i] *= 0.5 * (2 * i + 1);
    return a;
}

std::optional<double> decay_slope(const std::vector<double>& a)
{
    std::vector<double> x, y;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i]) > 1e-14) {
            x.push_back(static_cast<double>(i));
            y.push_back(std::log(std::abs(a[i])));
        }
    if (x.size() < 2)
        return std::nullopt;
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

Refinement decide_refinement(const std::vector<std::optional<double>>& slopes, double delta)
{
    for (const auto& m : slopes)
        if (m && std::exp(*m) > delta)
            return Refinement::H;
    return Refinement::P;
}

std::vector<std::optional<double>> element_slopes(const BoundaryMesh& mesh, const DofMap& dofs,
                                                  const Eigen::VectorXd& u_reduced, const Eigen::VectorXd& psi,
                                                  int e)
{
    const int p = mesh.elements[e].p;
    std::vector<std::optional<double>> out;
    if (mesh.elements[e].part == Part::Dirichlet) {
        if (p - 1 < 1)
            return {std::nullopt, std::nullopt};
        const std::vector<int>& map = dofs.density().map[e];
        for (int c = 0; c < 2; ++c) {
            // density coefficients are Legendre coefficients already
            std::vector<double> a(p);
            for (int i = 0; i < p; ++i)
                a[i] = psi(map[2 * i + c]);
            out.push_back(decay_slope(a));
        }
        return out;
    }
    for (int c = 0; c < 2; ++c) {
        const auto a = legendre_coefficients(
            [&](double xi) { return evaluate_trace(dofs.reduced(), u_reduced, e, xi)(c); }, p);
        out.push_back(decay_slope(a));
    }
    return out;
}

std::vector<std::pair<int, Refinement>> plan_refinement(const BoundaryMesh& mesh, const DofMap& dofs,
                                                        const Eigen::VectorXd& u_reduced,
                                                        const Eigen::VectorXd& psi,
                                                        const std::vector<IndicatorRecord>& indicators,
                                                        const AdaptiveConfig& cfg)
{
    std::vector<std::pair<int, Refinement>> plan;
    if (cfg.mode == AdaptiveMode::Uniform) {
        for (int e = 0; e < mesh.size(); ++e)
            plan.emplace_back(e, Refinement::H);
        return plan;
    }
    std::vector<double> eta(indicators.size());
    for (std::size_t i = 0; i < indicators.size(); ++i)
        eta[i] = indicators[i].total();
    for (int e : doerfler_mark(eta, cfg.theta)) {
        Refinement r = Refinement::H;
        if (cfg.mode == AdaptiveMode::HP)
            r = decide_refinement(element_slopes(mesh, dofs, u_reduced, psi, e), cfg.delta);
        plan.emplace_back(e, r);
    }
    std::sort(plan.begin(), plan.end());
    return plan;
}

} // namespace hembem
