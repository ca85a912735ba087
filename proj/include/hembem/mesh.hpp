#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <utility>
#include <vector>

namespace hembem {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class Part { Dirichlet, Neumann, Contact };

char part_letter(Part part);

struct Element {
    int v0 = 0;
    int v1 = 0;
    Part part = Part::Neumann;
    int p = 1;
    int level = 0;
    long uid = 0;
    long parent = -1; ///< uid of the bisected parent, -1 for initial elements
};

/// Closed polygonal boundary mesh, elements ordered counterclockwise.
class BoundaryMesh {
public:
    std::vector<Vec2> vertices;
    std::vector<Element> elements;
    long next_uid = 0;

    int size() const { return static_cast<int>(elements.size()); }
    const Vec2& start(int e) const { return vertices[elements[e].v0]; }
    const Vec2& end(int e) const { return vertices[elements[e].v1]; }
    double length(int e) const;
    Vec2 tangent(int e) const;
    /// Outward unit normal (t_y, -t_x).
    Vec2 normal(int e) const;
    /// Affine image of xi in [-1,1].
    Vec2 point(int e, double xi) const;
    double perimeter() const;
    /// Cumulative arclength at the start of every element (size()+1 entries).
    std::vector<double> arclength_offsets() const;

    /// Throws ConfigError if the loop is open, clockwise, or lacks a Dirichlet/Contact part.
    void validate() const;
};

/// Boundary of the square (0,side)^2 with n0 elements per side:
/// bottom contact, right and top Neumann, left Dirichlet.
BoundaryMesh build_benchmark_mesh(int n0, double side = 0.5);

enum class Refinement { H, P };

/// Bisects (H) or raises the degree (P) of the listed elements; returns a new mesh.
BoundaryMesh refine(const BoundaryMesh& mesh, const std::vector<std::pair<int, Refinement>>& decisions);

/// Uniform bisection of every element.
BoundaryMesh refine_uniform(const BoundaryMesh& mesh);

/// Copy with all coordinates multiplied by factor.
BoundaryMesh scaled(const BoundaryMesh& mesh, double factor);

struct ConstraintNode {
    Vec2 point;
    int element = 0; ///< owning contact element (first one in loop order for shared endpoints)
    double xi = 0.0; ///< reference coordinate in the owning element
};

/// Gauss-Lobatto nodes of all contact elements, shared endpoints once.
std::vector<ConstraintNode> constraint_node_set(const BoundaryMesh& mesh);

/// Piece of the coarsened multiplier mesh on the contact boundary.
struct MultiplierElement {
    std::vector<int> children; ///< contact elements covered, in loop order
    int q = 0;                 ///< polynomial degree
    double s0 = 0.0;           ///< arclength along the contact chain where the piece starts
    double length = 0.0;
};

struct MultiplierMesh {
    std::vector<MultiplierElement> elements;
    std::vector<int> owner;       ///< per mesh element: multiplier element index or -1
    std::vector<double> s_start;  ///< per mesh element: contact arclength at its start (contact only)
    int size() const { return static_cast<int>(elements.size()); }
    int dof_count() const;
    /// First coefficient index of each multiplier element.
    std::vector<int> offsets() const;
};

/// Merge contact elements pairwise back one ancestry level; degrees q = max(p-1) floored at 0.
MultiplierMesh coarsen_multiplier_space(const BoundaryMesh& mesh);

/// Ordered list of the contact elements (loop order, starting at the Dirichlet/contact corner).
std::vector<int> contact_chain(const BoundaryMesh& mesh);

/// One JSON object per line: {id, v0, v1, part, p, level}.
void write_mesh_jsonl(std::ostream& out, const BoundaryMesh& mesh);

} // namespace hembem
