#include "hembem/trace.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hembem {

ElementPoint locate_arclength(const BoundaryMesh& mesh, const std::vector<double>& offsets, double s)
{
    const double L = offsets.back();
    s = std::fmod(s, L);
    if (s < 0.0)
        s += L;
    auto it = std::upper_bound(offsets.begin(), offsets.end(), s);
    int e = static_cast<int>(it - offsets.begin()) - 1;
    e = std::clamp(e, 0, mesh.size() - 1);
    const double len = offsets[e + 1] - offsets[e];
    const double xi = std::clamp(2.0 * (s - offsets[e]) / len - 1.0, -1.0, 1.0);
    return {e, xi};
}

Vec2 evaluate_trace(const TraceSpace& space, const Eigen::VectorXd& coef, int e, double xi)
{
    const LocalBasis& basis = space.basis[e];
    const std::vector<int>& map = space.map[e];
    double f[64];
    if (basis.count() > 64)
        throw DomainError("evaluate_trace: local basis too large");
    basis.evaluate(xi, f, nullptr);
    Vec2 v = Vec2::Zero();
    for (int i = 0; i < basis.count(); ++i)
        for (int c = 0; c < 2; ++c)
            if (map[2 * i + c] >= 0)
                v(c) += coef(map[2 * i + c]) * f[i];
    return v;
}

Eigen::VectorXd prolongate_full(const BoundaryMesh& coarse, const DofMap& coarse_dofs, const Eigen::VectorXd& u,
                                const BoundaryMesh& fine, const DofMap& fine_dofs)
{
    if (u.size() != coarse_dofs.n_full())
        throw DomainError("prolongate: coefficient vector has the wrong size");
    if ((coarse.vertices[coarse.elements[0].v0] - fine.vertices[fine.elements[0].v0]).norm() > 1e-12 ||
        std::abs(coarse.perimeter() - fine.perimeter()) > 1e-12 * coarse.perimeter())
        throw DomainError("prolongate: meshes describe different boundaries");
    const std::vector<double> co = coarse.arclength_offsets();
    const std::vector<double> fo = fine.arclength_offsets();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(fine_dofs.n_full());
    for (int e = 0; e < fine.size(); ++e) {
        const std::vector<double> xi = gauss_lobatto_nodes(fine.elements[e].p);
        const std::vector<int>& map = fine_dofs.full().map[e];
        for (std::size_t k = 0; k < xi.size(); ++k) {
            const double s = fo[e] + 0.5 * (xi[k] + 1.0) * (fo[e + 1] - fo[e]);
            const ElementPoint at = locate_arclength(coarse, co, s);
            const Vec2 val = evaluate_trace(coarse_dofs.full(), u, at.element, at.xi);
            v(map[2 * k]) = val.x();
            v(map[2 * k + 1]) = val.y();
        }
    }
    return v;
}

Eigen::VectorXd prolongate_reduced(const BoundaryMesh& coarse, const DofMap& coarse_dofs,
                                   const Eigen::VectorXd& u, const BoundaryMesh& fine, const DofMap& fine_dofs)
{
    return restrict_to_reduced(fine_dofs, prolongate_full(coarse, coarse_dofs, extend_to_full(coarse_dofs, u),
                                                          fine, fine_dofs));
}

std::vector<ContactSample> sample_contact(const BoundaryMesh& mesh, const DofMap& dofs,
                                          const Eigen::VectorXd& u_reduced, int points_per_element)
{
    if (points_per_element < 1)
        throw DomainError("sample_contact: need at least one point per element");
    std::vector<ContactSample> out;
    double s0 = 0.0;
    for (int e : contact_chain(mesh)) {
        const double len = mesh.length(e);
        const Vec2 n = mesh.normal(e);
        for (int k = 0; k < points_per_element; ++k) {
            const double t = (k + 0.5) / points_per_element;
            const double xi = 2.0 * t - 1.0;
            const Vec2 val = evaluate_trace(dofs.reduced(), u_reduced, e, xi);
            out.push_back({s0 + t * len, mesh.point(e, xi), e, xi, val.dot(n)});
        }
        s0 += len;
    }
    return out;
}

} // namespace hembem
