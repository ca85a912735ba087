#include "hembem/regularization.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hembem {

namespace {
void require_positive(double eps)
{
    if (!(eps > 0.0))
        throw DomainError("regularization parameter must be positive");
}
} // namespace

double plus_smooth(double t, double eps)
{
    require_positive(eps);
    if (t < -0.5 * eps)
        return 0.0;
    if (t > 0.5 * eps)
        return t;
    const double s = t + 0.5 * eps;
    return s * s / (2.0 * eps);
}

double plus_smooth_deriv(double t, double eps)
{
    require_positive(eps);
    if (t < -0.5 * eps)
        return 0.0;
    if (t > 0.5 * eps)
        return 1.0;
    return t / eps + 0.5;
}

double plus_smooth_second(double t, double eps)
{
    require_positive(eps);
    return (t >= -0.5 * eps && t < 0.5 * eps) ? 1.0 / eps : 0.0;
}

void LawSpec::validate() const
{
    if (pieces.empty())
        throw ConfigError("law: at least one piece required");
    for (const auto& g : pieces)
        if (!std::isfinite(g.a) || !std::isfinite(g.c) || !std::isfinite(g.d))
            throw ConfigError("law: non-finite coefficient");
    if (!std::isfinite(arg_scale) || !std::isfinite(arg_offset) || arg_scale == 0.0)
        throw ConfigError("law: invalid argument map");
}

double LawSpec::exact(double x) const
{
    const double y = argument(x);
    double f = pieces.front().value(y);
    for (const auto& g : pieces)
        f = (mode == LawMode::Max) ? std::max(f, g.value(y)) : std::min(f, g.value(y));
    return f;
}

LawSpec delamination_law(double A1, double A2, double t1, double t2)
{
    if (!(A1 > 0.0 && A2 > 0.0 && t1 > 0.0 && t2 > t1))
        throw ConfigError("law: need A1, A2 > 0 and 0 < t1 < t2");
    const double b2 = A2 / (2.0 * t2);
    const double d2 = A1 * t1 / 2.0;
    const double d3 = b2 * (t2 * t2 - t1 * t1) + d2;
    LawSpec law;
    law.mode = LawMode::Min;
    law.pieces = {{A1 / t1, 0.0, 0.0}, {2.0 * b2, 0.0, d2 - b2 * t1 * t1}, {0.0, 0.0, d3}};
    law.arg_scale = -1.0; // opening y = g - u_n with g = 0
    law.arg_offset = 0.0;
    return law;
}

LawSpec benchmark_law() { return delamination_law(0.05, 0.03, 0.02, 0.04); }

RegularizedLaw::RegularizedLaw(LawSpec spec, double eps, Density density)
    : spec_(std::move(spec)), eps_(eps), density_(density)
{
    spec_.validate();
    require_positive(eps);
}

RegularizedLaw::Eval RegularizedLaw::evaluate_max(double y, bool negate) const
{
    const double sign = negate ? -1.0 : 1.0;
    const auto& g = spec_.pieces;
    const int m = static_cast<int>(g.size());
    double r = 0.0, dr = 0.0, ddr = 0.0;
    for (int k = m - 2; k >= 0; --k) {
        const double arg = sign * (g[k + 1].value(y) - g[k].value(y)) + r;
        const double darg = sign * (g[k + 1].slope(y) - g[k].slope(y)) + dr;
        const double ddarg = sign * (g[k + 1].a - g[k].a) + ddr;
        const double p1 = plus_smooth_deriv(arg, eps_);
        r = plus_smooth(arg, eps_);
        ddr = plus_smooth_second(arg, eps_) * darg * darg + p1 * ddarg;
        dr = p1 * darg;
    }
    return {sign * g[0].value(y) + r, sign * g[0].slope(y) + dr, sign * g[0].a + ddr};
}

double RegularizedLaw::value(double x) const
{
    const bool neg = spec_.mode == LawMode::Min;
    const double s = evaluate_max(spec_.argument(x), neg).value;
    return neg ? -s : s;
}

double RegularizedLaw::deriv(double x) const
{
    const bool neg = spec_.mode == LawMode::Min;
    const double s = evaluate_max(spec_.argument(x), neg).slope;
    return (neg ? -s : s) * spec_.arg_scale;
}

double RegularizedLaw::second(double x) const
{
    const bool neg = spec_.mode == LawMode::Min;
    const double s = evaluate_max(spec_.argument(x), neg).curvature;
    return (neg ? -s : s) * spec_.arg_scale * spec_.arg_scale;
}

std::vector<double> RegularizedLaw::weights(double x) const
{
    const double y = spec_.argument(x);
    const double sign = spec_.mode == LawMode::Min ? -1.0 : 1.0;
    const auto& g = spec_.pieces;
    const int m = static_cast<int>(g.size());
    std::vector<double> pi(std::max(m - 1, 0));
    double r = 0.0;
    for (int k = m - 2; k >= 0; --k) {
        const double arg = sign * (g[k + 1].value(y) - g[k].value(y)) + r;
        pi[k] = plus_smooth_deriv(arg, eps_);
        r = plus_smooth(arg, eps_);
    }
    std::vector<double> w(m);
    double prod = 1.0;
    for (int k = 0; k < m; ++k) {
        w[k] = (k + 1 < m) ? prod * (1.0 - pi[k]) : prod;
        if (k + 1 < m)
            prod *= pi[k];
    }
    return w;
}

double smooth_value(const RegularizedLaw& law, double x) { return law.value(x); }
double smooth_deriv(const RegularizedLaw& law, double x) { return law.deriv(x); }

double check_uniqueness_bound(const RegularizedLaw& law, int n_samples, double radius, std::uint64_t seed)
{
    if (n_samples < 1)
        throw DomainError("check_uniqueness_bound: need at least one sample");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-radius, radius);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i) {
        const double x1 = dist(rng), x2 = dist(rng);
        if (x1 == x2)
            continue;
        const double ratio = (law.deriv(x1) - law.deriv(x2)) * (x1 - x2) / ((x1 - x2) * (x1 - x2));
        worst = std::min(worst, ratio);
    }
    return worst;
}

namespace {

// Visits the Gauss points of all contact elements with the normal traces of the local basis.
template <class Visit>
void for_contact_points(const Eigen::VectorXd& u, const BoundaryMesh& mesh, const DofMap& dofs,
                        int extra, Visit&& visit)
{
    const TraceSpace& space = dofs.reduced();
    if (u.size() != space.size)
        throw DomainError("contact integral: coefficient vector has the wrong size");
    std::vector<double> f;
    std::vector<int> idx;
    std::vector<double> phin;
    for (int e = 0; e < mesh.size(); ++e) {
        if (mesh.elements[e].part != Part::Contact)
            continue;
        const LocalBasis& basis = space.basis[e];
        const std::vector<int>& map = space.map[e];
        const Vec2 n = mesh.normal(e);
        const QuadratureRule& q = gauss_legendre(contact_quadrature_points(mesh.elements[e].p, extra));
        const double jac = 0.5 * mesh.length(e);
        f.resize(basis.count());
        for (int k = 0; k < q.size(); ++k) {
            basis.evaluate(q.points[k], f.data(), nullptr);
            idx.clear();
            phin.clear();
            double un = 0.0;
            for (int i = 0; i < basis.count(); ++i)
                for (int c = 0; c < 2; ++c) {
                    const int j = map[2 * i + c];
                    if (j < 0 || n(c) == 0.0)
                        continue;
                    idx.push_back(j);
                    phin.push_back(f[i] * n(c));
                    un += u(j) * f[i] * n(c);
                }
            visit(un, q.weights[k] * jac, idx, phin);
        }
    }
}

} // namespace

Eigen::VectorXd assemble_DJ(const Eigen::VectorXd& u, const BoundaryMesh& mesh, const DofMap& dofs,
                            const RegularizedLaw& law, int extra_points)
{
    Eigen::VectorXd r = Eigen::VectorXd::Zero(u.size());
    for_contact_points(u, mesh, dofs, extra_points,
                       [&](double un, double w, const std::vector<int>& idx, const std::vector<double>& phin) {
                           const double s = law.deriv(un);
                           if (!std::isfinite(s))
                               throw NumericalError("law evaluation produced NaN");
                           for (std::size_t i = 0; i < idx.size(); ++i)
                               r(idx[i]) += w * s * phin[i];
                       });
    return r;
}

Eigen::MatrixXd assemble_DJ_jacobian(const Eigen::VectorXd& u, const BoundaryMesh& mesh,
                                     const DofMap& dofs, const RegularizedLaw& law, int extra_points)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(u.size(), u.size());
    for_contact_points(u, mesh, dofs, extra_points,
                       [&](double un, double w, const std::vector<int>& idx, const std::vector<double>& phin) {
                           const double s = law.second(un);
                           if (s == 0.0)
                               return;
                           for (std::size_t i = 0; i < idx.size(); ++i)
                               for (std::size_t j = 0; j < idx.size(); ++j)
                                   J(idx[i], idx[j]) += w * s * phin[i] * phin[j];
                       });
    return J;
}

double assemble_J(const Eigen::VectorXd& u, const BoundaryMesh& mesh, const DofMap& dofs,
                  const RegularizedLaw& law, int extra_points)
{
    double sum = 0.0;
    for_contact_points(u, mesh, dofs, extra_points,
                       [&](double un, double w, const std::vector<int>&, const std::vector<double>&) {
                           sum += w * law.value(un);
                       });
    return sum;
}

} // namespace hembem
