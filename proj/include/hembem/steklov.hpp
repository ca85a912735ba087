#pragma once

#include "hembem/assembly.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <vector>

namespace hembem {

/// Discrete Dirichlet-to-Neumann map P = W + (K + I/2)^T V^{-1} (K + I/2) with Gamma_D eliminated.
class SteklovOperator {
public:
    SteklovOperator(const BemMatrices& bem, const DofMap& dofs);

    /// Operator on the Dirichlet-reduced dofs.
    const Eigen::MatrixXd& matrix() const { return P_; }
    /// Operator on the full trace space (no elimination).
    const Eigen::MatrixXd& full_matrix() const { return P_full_; }
    /// V^{-1}(K + I/2), density rows by full-trace columns.
    const Eigen::MatrixXd& density_map() const { return B_; }
    const Eigen::LLT<Eigen::MatrixXd>& v_factor() const { return llt_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return P_ * v; }
    /// Density psi = V^{-1}(K + I/2) u for a reduced displacement u.
    Eigen::VectorXd density(const Eigen::VectorXd& u_reduced) const;

private:
    Eigen::MatrixXd P_, P_full_, B_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    std::vector<int> full_of_reduced_;
};

/// sqrt(v^T P v); throws DiagnosticsError when the form is negative beyond round-off.
double energy_norm(const Eigen::MatrixXd& P, const Eigen::VectorXd& v);

/// Constant traction on a straight segment of the boundary.
struct TractionSegment {
    Vec2 a, b;
    Vec2 value;
};

/// The benchmark pull (0, 0.25) on the top edge x in [1/4, 1/2], y = 1/2.
TractionSegment benchmark_traction();

struct LoadFunctional {
    Eigen::VectorXd F; ///< reduced dofs
    std::vector<TractionSegment> traction;
};

/// <t, phi_j> over the Neumann elements for any element-local space.
Eigen::VectorXd load_vector(const BoundaryMesh& mesh, const TraceSpace& space,
                            const std::vector<TractionSegment>& traction);

/// F_j = int_{Gamma_N} t . phi_j; every Neumann element must lie fully inside or outside each segment.
LoadFunctional assemble_load(const BoundaryMesh& mesh, const DofMap& dofs,
                             const std::vector<TractionSegment>& traction);

} // namespace hembem
