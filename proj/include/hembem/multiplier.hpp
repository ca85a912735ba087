#pragma once

#include "hembem/assembly.hpp"
#include "hembem/steklov.hpp"
#include "hembem/vi_solver.hpp"

#include <Eigen/Core>

namespace hembem {

/// Scalar piecewise Legendre function on a multiplier mesh, parametrized by contact arclength.
struct MultiplierSolution {
    MultiplierMesh space;
    Eigen::VectorXd coef;
    double residual = 0.0;

    /// Value at contact arclength s (clamped to the chain).
    double value_at(double s) const;
    /// Value on contact element e of the mesh the space was built on.
    double value(int e, double xi, const BoundaryMesh& mesh) const;
};

struct MultiplierOptions {
    /// Keep test rows whose normal trace vanishes on Gamma_C (they only add to the residual).
    bool keep_zero_rows = true;
};

/// M_{j,i} = <psi_i, (phi_j)_n>_{Gamma_C} over the reduced trace dofs j.
Eigen::MatrixXd multiplier_coupling(const BoundaryMesh& mesh, const DofMap& dofs, const MultiplierMesh& space);

/// Least-squares fit of <lambda, v_n> = <F, v> - <P u, v> on the given multiplier space.
MultiplierSolution reconstruct_multiplier(const Eigen::VectorXd& u, const BoundaryMesh& mesh, const DofMap& dofs,
                                          const SteklovOperator& P, const LoadFunctional& F,
                                          const MultiplierMesh& space, const MultiplierOptions& opts = {});

/// Same on the coarsened space of the mesh.
MultiplierSolution reconstruct_multiplier(const DiscreteSolution& u, const BoundaryMesh& mesh, const DofMap& dofs,
                                          const SteklovOperator& P, const LoadFunctional& F,
                                          const MultiplierOptions& opts = {});

/// Splits every multiplier element into its mesh elements keeping the degree (a refinement of the space).
MultiplierMesh split_multiplier_space(const MultiplierMesh& space);

/// sqrt(<V mu, mu>) of mu = a - b as normal traction mu n on Gamma_C of `geometry`,
/// evaluated on the common refinement of both multiplier meshes.
double norm_V_on_contact(const MultiplierSolution& a, const MultiplierSolution& b, const BoundaryMesh& geometry,
                         const Material& mat, const QuadratureOptions& opts = {});

} // namespace hembem
