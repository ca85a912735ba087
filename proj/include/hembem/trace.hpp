#pragma once

#include "hembem/dofs.hpp"

#include <Eigen/Core>

#include <vector>

namespace hembem {

struct ElementPoint {
    int element = 0;
    double xi = 0.0;
};

/// Element and reference coordinate at loop arclength s (wrapped to [0, perimeter)).
ElementPoint locate_arclength(const BoundaryMesh& mesh, const std::vector<double>& offsets, double s);

/// Value of a vector trace with coefficients coef at (e, xi).
Vec2 evaluate_trace(const TraceSpace& space, const Eigen::VectorXd& coef, int e, double xi);

/// Nodal interpolant on `fine` of a trace living on `coarse`; exact for nested spaces.
/// Both meshes must describe the same polygon starting at the same vertex.
Eigen::VectorXd prolongate_full(const BoundaryMesh& coarse, const DofMap& coarse_dofs, const Eigen::VectorXd& u,
                                const BoundaryMesh& fine, const DofMap& fine_dofs);
Eigen::VectorXd prolongate_reduced(const BoundaryMesh& coarse, const DofMap& coarse_dofs,
                                   const Eigen::VectorXd& u, const BoundaryMesh& fine, const DofMap& fine_dofs);

struct ContactSample {
    double s;   ///< arclength along the contact chain
    Vec2 point;
    int element;
    double xi;
    double un;  ///< normal displacement
};

/// Normal displacement at n equispaced interior points of every contact element (loop order).
std::vector<ContactSample> sample_contact(const BoundaryMesh& mesh, const DofMap& dofs,
                                          const Eigen::VectorXd& u_reduced, int points_per_element);

} // namespace hembem
