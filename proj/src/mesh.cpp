#include "hembem/mesh.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace hembem {

char part_letter(Part part)
{
    switch (part) {
    case Part::Dirichlet:
        return 'D';
    case Part::Neumann:
        return 'N';
    case Part::Contact:
        return 'C';
    }
    return '?';
}

double BoundaryMesh::length(int e) const { return (end(e) - start(e)).norm(); }

Vec2 BoundaryMesh::tangent(int e) const { return (end(e) - start(e)) / length(e); }

Vec2 BoundaryMesh::normal(int e) const
{
    const Vec2 t = tangent(e);
    return Vec2(t.y(), -t.x());
}

Vec2 BoundaryMesh::point(int e, double xi) const
{
    return start(e) + 0.5 * (xi + 1.0) * (end(e) - start(e));
}

double BoundaryMesh::perimeter() const
{
    double sum = 0.0;
    for (int e = 0; e < size(); ++e)
        sum += length(e);
    return sum;
}

std::vector<double> BoundaryMesh::arclength_offsets() const
{
    std::vector<double> s(size() + 1, 0.0);
    for (int e = 0; e < size(); ++e)
        s[e + 1] = s[e] + length(e);
    return s;
}

void BoundaryMesh::validate() const
{
    if (elements.size() < 3)
        throw ConfigError("mesh: need at least three elements");
    double area2 = 0.0, dirichlet = 0.0, contact = 0.0;
    for (int e = 0; e < size(); ++e) {
        const Element& el = elements[e];
        if (el.v0 < 0 || el.v1 < 0 || el.v0 >= static_cast<int>(vertices.size())
            || el.v1 >= static_cast<int>(vertices.size()))
            throw ConfigError("mesh: vertex index out of range");
        if (el.p < 1)
            throw ConfigError("mesh: element degree must be >= 1");
        if (length(e) <= 0.0)
            throw ConfigError("mesh: degenerate element");
        if (elements[(e + 1) % size()].v0 != el.v1)
            throw ConfigError("mesh: element loop is not closed");
        area2 += start(e).x() * end(e).y() - end(e).x() * start(e).y();
        if (el.part == Part::Dirichlet)
            dirichlet += length(e);
        if (el.part == Part::Contact)
            contact += length(e);
    }
    if (area2 <= 0.0)
        throw ConfigError("mesh: boundary is not counterclockwise");
    if (dirichlet <= 0.0 || contact <= 0.0)
        throw ConfigError("mesh: Dirichlet and contact parts must have positive measure");
}

BoundaryMesh build_benchmark_mesh(int n0, double side)
{
    if (n0 < 1)
        throw DomainError("build_benchmark_mesh: n0 must be >= 1");
    BoundaryMesh mesh;
    const Vec2 corners[4] = {Vec2(0, 0), Vec2(side, 0), Vec2(side, side), Vec2(0, side)};
    const Part parts[4] = {Part::Contact, Part::Neumann, Part::Neumann, Part::Dirichlet};
    for (int s = 0; s < 4; ++s) {
        const Vec2& a = corners[s];
        const Vec2& b = corners[(s + 1) % 4];
        for (int k = 0; k < n0; ++k)
            mesh.vertices.push_back(a + (b - a) * (static_cast<double>(k) / n0));
    }
    const int nv = static_cast<int>(mesh.vertices.size());
    for (int s = 0; s < 4; ++s) {
        for (int k = 0; k < n0; ++k) {
            Element el;
            el.v0 = s * n0 + k;
            el.v1 = (el.v0 + 1) % nv;
            el.part = parts[s];
            el.uid = mesh.next_uid++;
            mesh.elements.push_back(el);
        }
    }
    return mesh;
}

BoundaryMesh refine(const BoundaryMesh& mesh, const std::vector<std::pair<int, Refinement>>& decisions)
{
    std::vector<int> action(mesh.size(), -1);
    for (const auto& [e, r] : decisions) {
        if (e < 0 || e >= mesh.size())
            throw DomainError("refine: decision references a missing element");
        action[e] = (r == Refinement::H) ? 0 : 1;
    }
    BoundaryMesh out;
    out.vertices = mesh.vertices;
    out.next_uid = mesh.next_uid;
    for (int e = 0; e < mesh.size(); ++e) {
        const Element& el = mesh.elements[e];
        if (action[e] == 0) {
            const int mid = static_cast<int>(out.vertices.size());
            out.vertices.push_back(0.5 * (mesh.start(e) + mesh.end(e)));
            Element left = el, right = el;
            left.v1 = mid;
            right.v0 = mid;
            left.level = right.level = el.level + 1;
            left.parent = right.parent = el.uid;
            left.uid = out.next_uid++;
            right.uid = out.next_uid++;
            out.elements.push_back(left);
            out.elements.push_back(right);
        } else {
            Element copy = el;
            if (action[e] == 1)
                copy.p += 1;
            out.elements.push_back(copy);
        }
    }
    return out;
}

BoundaryMesh refine_uniform(const BoundaryMesh& mesh)
{
    std::vector<std::pair<int, Refinement>> all;
    for (int e = 0; e < mesh.size(); ++e)
        all.emplace_back(e, Refinement::H);
    return refine(mesh, all);
}

BoundaryMesh scaled(const BoundaryMesh& mesh, double factor)
{
    BoundaryMesh out = mesh;
    for (Vec2& v : out.vertices)
        v *= factor;
    return out;
}

std::vector<int> contact_chain(const BoundaryMesh& mesh)
{
    const int n = mesh.size();
    int first = -1;
    for (int e = 0; e < n; ++e) {
        const int prev = (e + n - 1) % n;
        if (mesh.elements[e].part == Part::Contact && mesh.elements[prev].part != Part::Contact) {
            first = e;
            break;
        }
    }
    std::vector<int> chain;
    if (first < 0) {
        for (int e = 0; e < n; ++e)
            if (mesh.elements[e].part == Part::Contact)
                chain.push_back(e);
        return chain;
    }
    for (int k = 0; k < n; ++k) {
        const int e = (first + k) % n;
        if (mesh.elements[e].part == Part::Contact)
            chain.push_back(e);
    }
    return chain;
}

std::vector<ConstraintNode> constraint_node_set(const BoundaryMesh& mesh)
{
    std::vector<ConstraintNode> nodes;
    std::map<int, bool> seen_vertex;
    for (int e : contact_chain(mesh)) {
        const Element& el = mesh.elements[e];
        const std::vector<double> xi = gauss_lobatto_nodes(el.p);
        for (int k = 0; k <= el.p; ++k) {
            if (k == 0 || k == el.p) {
                const int v = (k == 0) ? el.v0 : el.v1;
                if (seen_vertex[v])
                    continue;
                seen_vertex[v] = true;
            }
            nodes.push_back({mesh.point(e, xi[k]), e, xi[k]});
        }
    }
    return nodes;
}

int MultiplierMesh::dof_count() const
{
    int n = 0;
    for (const auto& m : elements)
        n += m.q + 1;
    return n;
}

std::vector<int> MultiplierMesh::offsets() const
{
    std::vector<int> off(elements.size() + 1, 0);
    for (std::size_t i = 0; i < elements.size(); ++i)
        off[i + 1] = off[i] + elements[i].q + 1;
    return off;
}

MultiplierMesh coarsen_multiplier_space(const BoundaryMesh& mesh)
{
    const std::vector<int> chain = contact_chain(mesh);
    const int n = static_cast<int>(chain.size());
    MultiplierMesh mm;
    mm.owner.assign(mesh.size(), -1);
    mm.s_start.assign(mesh.size(), 0.0);

    std::vector<double> s(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        s[i + 1] = s[i] + mesh.length(chain[i]);
        mm.s_start[chain[i]] = s[i];
    }
    auto connected = [&](int i) {
        return i + 1 < n && mesh.elements[chain[i]].v1 == mesh.elements[chain[i + 1]].v0;
    };
    auto siblings = [&](int i) {
        if (!connected(i))
            return false;
        const Element& a = mesh.elements[chain[i]];
        const Element& b = mesh.elements[chain[i + 1]];
        return a.parent >= 0 && a.parent == b.parent;
    };

    int i = 0;
    while (i < n) {
        MultiplierElement me;
        int take = 1;
        if (siblings(i)) {
            take = 2;
        } else if (connected(i) && !siblings(i + 1)) {
            // no sibling available: pair with the next element by position
            take = 2;
        }
        int q = 0;
        for (int k = 0; k < take; ++k) {
            me.children.push_back(chain[i + k]);
            q = std::max(q, mesh.elements[chain[i + k]].p - 1);
        }
        me.q = q;
        me.s0 = s[i];
        me.length = s[i + take] - s[i];
        for (int c : me.children)
            mm.owner[c] = mm.size();
        mm.elements.push_back(me);
        i += take;
    }
    return mm;
}

void write_mesh_jsonl(std::ostream& out, const BoundaryMesh& mesh)
{
    for (int e = 0; e < mesh.size(); ++e) {
        nlohmann::json j;
        j["id"] = e;
        j["v0"] = {mesh.start(e).x(), mesh.start(e).y()};
        j["v1"] = {mesh.end(e).x(), mesh.end(e).y()};
        j["part"] = std::string(1, part_letter(mesh.elements[e].part));
        j["p"] = mesh.elements[e].p;
        j["level"] = mesh.elements[e].level;
        out << j.dump() << '\n';
    }
}

} // namespace hembem
