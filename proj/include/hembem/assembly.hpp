#pragma once

#include "hembem/dofs.hpp"
#include "hembem/kernels.hpp"

#include <Eigen/Core>

#include <iosfwd>

namespace hembem {

struct QuadratureOptions {
    /// Gauss points per direction for regular pairs: polynomial degree + regular_extra.
    int regular_extra = 4;
    /// Extra points (beyond what polynomial exactness needs) on self and adjacent pairs.
    int singular_extra = 2;
    /// Gauss points for the smooth angular variable of adjacent pairs: degree + angular_extra.
    int angular_extra = 10;
    /// A pair of panels is treated as regular when dist >= admissibility * max(length).
    double admissibility = 3.0;
    int max_depth = 30;
};

/// Galerkin matrices of the Calderon operators.
struct BemMatrices {
    Eigen::MatrixXd V; ///< density x density
    Eigen::MatrixXd K; ///< density x full trace
    Eigen::MatrixXd W; ///< full trace x full trace
    Eigen::MatrixXd I; ///< density x full trace
};

/// Throws ConfigError unless the boundary lies in a disc of radius < 1.
void check_geometry_scaling(const BoundaryMesh& mesh);

Eigen::MatrixXd assemble_V(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial,
                           const Material& mat, const QuadratureOptions& opts = {});
Eigen::MatrixXd assemble_K(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial,
                           const Material& mat, const QuadratureOptions& opts = {});
Eigen::MatrixXd assemble_W(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial,
                           const Material& mat, const QuadratureOptions& opts = {});
Eigen::MatrixXd assemble_I(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial);

/// V over the density space, K, W and I over the full trace space.
BemMatrices assemble_bem(const BoundaryMesh& mesh, const DofMap& dofs, const Material& mat,
                         const QuadratureOptions& opts = {});

/// Row-major float64 dump preceded by two uint64 values (rows, cols).
void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_binary(std::istream& in);

} // namespace hembem
