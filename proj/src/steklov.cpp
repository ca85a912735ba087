#include "hembem/steklov.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <cmath>

namespace hembem {

SteklovOperator::SteklovOperator(const BemMatrices& bem, const DofMap& dofs)
    : full_of_reduced_(dofs.full_of_reduced())
{
    llt_.compute(bem.V);
    if (llt_.info() != Eigen::Success)
        throw NumericalError("steklov: single layer matrix is not positive definite");
    const Eigen::MatrixXd C = bem.K + 0.5 * bem.I;
    const Eigen::MatrixXd Y = llt_.matrixL().solve(C);
    P_full_ = bem.W;
    P_full_.selfadjointView<Eigen::Lower>().rankUpdate(Y.transpose());
    for (Eigen::Index j = 1; j < P_full_.cols(); ++j)
        for (Eigen::Index i = 0; i < j; ++i)
            P_full_(i, j) = P_full_(j, i);
    B_ = llt_.matrixU().solve(Y);

    const int n = dofs.n_reduced();
    P_.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            P_(i, j) = P_full_(full_of_reduced_[i], full_of_reduced_[j]);
}

Eigen::VectorXd SteklovOperator::density(const Eigen::VectorXd& u_reduced) const
{
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(B_.rows());
    for (int i = 0; i < u_reduced.size(); ++i)
        psi += B_.col(full_of_reduced_[i]) * u_reduced(i);
    return psi;
}

double energy_norm(const Eigen::MatrixXd& P, const Eigen::VectorXd& v)
{
    if (P.rows() != v.size())
        throw DomainError("energy_norm: size mismatch");
    const double q = v.dot(P * v);
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff() * v.squaredNorm());
    if (q < -1e-12 * scale)
        throw DiagnosticsError("energy_norm: negative quadratic form " + std::to_string(q));
    return std::sqrt(std::max(q, 0.0));
}

TractionSegment benchmark_traction()
{
    return {Vec2(0.25, 0.5), Vec2(0.5, 0.5), Vec2(0.0, 0.25)};
}

Eigen::VectorXd load_vector(const BoundaryMesh& mesh, const TraceSpace& space,
                            const std::vector<TractionSegment>& traction)
{
    Eigen::VectorXd F = Eigen::VectorXd::Zero(space.size);
    const double tol = 1e-12 * std::max(1.0, mesh.perimeter());
    for (const TractionSegment& seg : traction) {
        const Vec2 d = seg.b - seg.a;
        const double len = d.norm();
        if (len <= 0.0)
            throw ConfigError("traction: degenerate segment");
        const Vec2 dir = d / len;
        const Vec2 nrm(dir.y(), -dir.x());
        for (int e = 0; e < mesh.size(); ++e) {
            const Vec2 p0 = mesh.start(e), p1 = mesh.end(e);
            if (std::abs((p0 - seg.a).dot(nrm)) > tol || std::abs((p1 - seg.a).dot(nrm)) > tol)
                continue;
            double s0 = (p0 - seg.a).dot(dir), s1 = (p1 - seg.a).dot(dir);
            if (s0 > s1)
                std::swap(s0, s1);
            const double overlap = std::min(s1, len) - std::max(s0, 0.0);
            if (overlap <= tol)
                continue;
            if (s0 < -tol || s1 > len + tol)
                throw ConfigError("traction support is not resolved by the mesh (element "
                                  + std::to_string(e) + ")");
            if (mesh.elements[e].part != Part::Neumann)
                throw ConfigError("traction acts on a non-Neumann element " + std::to_string(e));
            const LocalBasis& basis = space.basis[e];
            const std::vector<int>& map = space.map[e];
            if (map.empty())
                continue;
            const QuadratureRule& q = gauss_legendre(basis.polynomial_degree() + 1);
            std::vector<double> f(basis.count());
            const double jac = 0.5 * mesh.length(e);
            for (int k = 0; k < q.size(); ++k) {
                basis.evaluate(q.points[k], f.data(), nullptr);
                for (int i = 0; i < basis.count(); ++i)
                    for (int c = 0; c < 2; ++c)
                        if (map[2 * i + c] >= 0)
                            F(map[2 * i + c]) += q.weights[k] * jac * f[i] * seg.value(c);
            }
        }
    }
    return F;
}

LoadFunctional assemble_load(const BoundaryMesh& mesh, const DofMap& dofs,
                             const std::vector<TractionSegment>& traction)
{
    return {load_vector(mesh, dofs.reduced(), traction), traction};
}

} // namespace hembem
