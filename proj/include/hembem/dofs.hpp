#pragma once

#include "hembem/mesh.hpp"
#include "hembem/shape.hpp"

#include <vector>

namespace hembem {

/// A vector-valued discrete space on the boundary: one local scalar basis per element,
/// duplicated for the two components. Local index 2*k + c maps to a global index or -1.
struct TraceSpace {
    std::vector<LocalBasis> basis;
    std::vector<std::vector<int>> map;
    int size = 0;

    int elements() const { return static_cast<int>(basis.size()); }
};

/// Degree-p_T spaces on a mesh: the continuous nodal trace space (full and Dirichlet-reduced)
/// and the discontinuous density space of degree p_T - 1.
class DofMap {
public:
    explicit DofMap(const BoundaryMesh& mesh);

    /// Continuous space including Dirichlet nodes.
    const TraceSpace& full() const { return full_; }
    /// Continuous space with Gamma_D nodes removed (the space V_hp).
    const TraceSpace& reduced() const { return reduced_; }
    /// Discontinuous Legendre space W_hp.
    const TraceSpace& density() const { return density_; }

    int n_full() const { return full_.size; }
    int n_reduced() const { return reduced_.size; }
    int n_density() const { return density_.size; }

    /// Full index of a reduced dof, and the inverse (-1 for eliminated dofs).
    const std::vector<int>& full_of_reduced() const { return full_of_reduced_; }
    const std::vector<int>& reduced_of_full() const { return reduced_of_full_; }

    /// Geometric location of global node k (full numbering uses dof = 2*node + component).
    const std::vector<Vec2>& node_points() const { return node_points_; }

private:
    TraceSpace full_, reduced_, density_;
    std::vector<int> full_of_reduced_, reduced_of_full_;
    std::vector<Vec2> node_points_;
};

/// One bubble L_{p+1} - L_{p-1} per element and component; elements whose part is excluded get -1.
TraceSpace bubble_space(const BoundaryMesh& mesh, bool include_dirichlet);

/// One Legendre mode L_{p_T} per component on Dirichlet elements only.
TraceSpace density_enrichment_space(const BoundaryMesh& mesh);

/// Coefficients of the nodal interpolant of f (evaluated at node points), full numbering.
template <class F>
Eigen::VectorXd interpolate_full(const DofMap& dofs, F&& f)
{
    Eigen::VectorXd u(dofs.n_full());
    const auto& pts = dofs.node_points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec2 v = f(pts[k]);
        u(2 * k) = v.x();
        u(2 * k + 1) = v.y();
    }
    return u;
}

Eigen::VectorXd restrict_to_reduced(const DofMap& dofs, const Eigen::VectorXd& full);
Eigen::VectorXd extend_to_full(const DofMap& dofs, const Eigen::VectorXd& reduced);

} // namespace hembem
