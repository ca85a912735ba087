#include "hembem/dofs.hpp"

#include "hembem/quadrature.hpp"

namespace hembem {

DofMap::DofMap(const BoundaryMesh& mesh)
{
    const int n = mesh.size();
    full_.basis.resize(n);
    full_.map.resize(n);
    density_.basis.resize(n);
    density_.map.resize(n);

    // vertex nodes first (one per mesh vertex that is used), then interior nodes per element
    std::vector<int> vertex_node(mesh.vertices.size(), -1);
    int nodes = 0;
    for (int e = 0; e < n; ++e) {
        const Element& el = mesh.elements[e];
        for (int v : {el.v0, el.v1}) {
            if (vertex_node[v] < 0) {
                vertex_node[v] = nodes++;
                node_points_.push_back(mesh.vertices[v]);
            }
        }
    }
    std::vector<bool> dirichlet_node;
    int density_count = 0;
    for (int e = 0; e < n; ++e) {
        const Element& el = mesh.elements[e];
        const std::vector<double> xi = gauss_lobatto_nodes(el.p);
        full_.basis[e] = LocalBasis(ShapeFamily::Lobatto, el.p);
        std::vector<int>& m = full_.map[e];
        m.resize(2 * (el.p + 1));
        for (int k = 0; k <= el.p; ++k) {
            int node;
            if (k == 0) {
                node = vertex_node[el.v0];
            } else if (k == el.p) {
                node = vertex_node[el.v1];
            } else {
                node = nodes++;
                node_points_.push_back(mesh.point(e, xi[k]));
            }
            m[2 * k] = 2 * node;
            m[2 * k + 1] = 2 * node + 1;
        }
        density_.basis[e] = LocalBasis(ShapeFamily::Legendre, el.p - 1);
        density_.map[e].resize(2 * el.p);
        for (int k = 0; k < 2 * el.p; ++k)
            density_.map[e][k] = density_count++;
    }
    full_.size = 2 * nodes;
    density_.size = density_count;

    dirichlet_node.assign(nodes, false);
    for (int e = 0; e < n; ++e)
        if (mesh.elements[e].part == Part::Dirichlet)
            for (int idx : full_.map[e])
                dirichlet_node[idx / 2] = true;

    reduced_of_full_.assign(full_.size, -1);
    for (int node = 0; node < nodes; ++node) {
        if (dirichlet_node[node])
            continue;
        for (int c = 0; c < 2; ++c) {
            reduced_of_full_[2 * node + c] = static_cast<int>(full_of_reduced_.size());
            full_of_reduced_.push_back(2 * node + c);
        }
    }
    reduced_ = full_;
    reduced_.size = static_cast<int>(full_of_reduced_.size());
    for (auto& m : reduced_.map)
        for (int& idx : m)
            idx = reduced_of_full_[idx];
}

TraceSpace bubble_space(const BoundaryMesh& mesh, bool include_dirichlet)
{
    TraceSpace s;
    s.basis.resize(mesh.size());
    s.map.resize(mesh.size());
    for (int e = 0; e < mesh.size(); ++e) {
        s.basis[e] = LocalBasis(ShapeFamily::Bubble, mesh.elements[e].p);
        const bool on = include_dirichlet || mesh.elements[e].part != Part::Dirichlet;
        s.map[e] = {on ? s.size : -1, on ? s.size + 1 : -1};
        if (on)
            s.size += 2;
    }
    return s;
}

TraceSpace density_enrichment_space(const BoundaryMesh& mesh)
{
    TraceSpace s;
    s.basis.resize(mesh.size());
    s.map.resize(mesh.size());
    for (int e = 0; e < mesh.size(); ++e) {
        s.basis[e] = LocalBasis(ShapeFamily::Mode, mesh.elements[e].p);
        const bool on = mesh.elements[e].part == Part::Dirichlet;
        s.map[e] = {on ? s.size : -1, on ? s.size + 1 : -1};
        if (on)
            s.size += 2;
    }
    return s;
}

Eigen::VectorXd restrict_to_reduced(const DofMap& dofs, const Eigen::VectorXd& full)
{
    Eigen::VectorXd r(dofs.n_reduced());
    for (int i = 0; i < dofs.n_reduced(); ++i)
        r(i) = full(dofs.full_of_reduced()[i]);
    return r;
}

Eigen::VectorXd extend_to_full(const DofMap& dofs, const Eigen::VectorXd& reduced)
{
    Eigen::VectorXd f = Eigen::VectorXd::Zero(dofs.n_full());
    for (int i = 0; i < dofs.n_reduced(); ++i)
        f(dofs.full_of_reduced()[i]) = reduced(i);
    return f;
}

} // namespace hembem
