#include "hembem/multiplier.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace hembem {

namespace {

std::vector<double> element_starts(const MultiplierMesh& space)
{
    std::vector<double> s;
    for (const auto& me : space.elements)
        s.push_back(me.s0);
    return s;
}

double eval_piece(const MultiplierMesh& space, const Eigen::VectorXd& coef, const std::vector<int>& off, int m,
                  double s)
{
    const MultiplierElement& me = space.elements[m];
    const double t = std::clamp(2.0 * (s - me.s0) / me.length - 1.0, -1.0, 1.0);
    double v = 0.0;
    for (int k = 0; k <= me.q; ++k)
        v += coef(off[m] + k) * legendre(k, t);
    return v;
}

} // namespace

double MultiplierSolution::value_at(double s) const
{
    if (space.elements.empty())
        return 0.0;
    const std::vector<double> starts = element_starts(space);
    int m = static_cast<int>(std::upper_bound(starts.begin(), starts.end(), s) - starts.begin()) - 1;
    m = std::clamp(m, 0, space.size() - 1);
    return eval_piece(space, coef, space.offsets(), m, s);
}

double MultiplierSolution::value(int e, double xi, const BoundaryMesh& mesh) const
{
    const int m = space.owner.at(e);
    if (m < 0)
        throw DomainError("multiplier: element is not on the contact boundary");
    const double s = space.s_start[e] + 0.5 * (xi + 1.0) * mesh.length(e);
    return eval_piece(space, coef, space.offsets(), m, s);
}

Eigen::MatrixXd multiplier_coupling(const BoundaryMesh& mesh, const DofMap& dofs, const MultiplierMesh& space)
{
    const TraceSpace& trace = dofs.reduced();
    const std::vector<int> off = space.offsets();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(trace.size, space.dof_count());
    std::vector<double> f;
    for (int e : contact_chain(mesh)) {
        const int m = space.owner[e];
        if (m < 0)
            continue;
        const MultiplierElement& me = space.elements[m];
        const LocalBasis& basis = trace.basis[e];
        const std::vector<int>& map = trace.map[e];
        const Vec2 n = mesh.normal(e);
        const double len = mesh.length(e);
        const QuadratureRule& q = gauss_legendre(basis.polynomial_degree() + me.q + 2);
        f.resize(basis.count());
        for (int k = 0; k < q.size(); ++k) {
            basis.evaluate(q.points[k], f.data(), nullptr);
            const double s = space.s_start[e] + 0.5 * (q.points[k] + 1.0) * len;
            const double t = 2.0 * (s - me.s0) / me.length - 1.0;
            const double w = q.weights[k] * 0.5 * len;
            for (int l = 0; l <= me.q; ++l) {
                const double psi = legendre(l, t);
                for (int i = 0; i < basis.count(); ++i)
                    for (int c = 0; c < 2; ++c)
                        if (map[2 * i + c] >= 0)
                            M(map[2 * i + c], off[m] + l) += w * psi * f[i] * n(c);
            }
        }
    }
    return M;
}

MultiplierSolution reconstruct_multiplier(const Eigen::VectorXd& u, const BoundaryMesh& mesh, const DofMap& dofs,
                                          const SteklovOperator& P, const LoadFunctional& F,
                                          const MultiplierMesh& space, const MultiplierOptions& opts)
{
    if (space.dof_count() == 0)
        throw ConfigError("multiplier space is empty (no contact elements)");
    Eigen::MatrixXd M = multiplier_coupling(mesh, dofs, space);
    Eigen::VectorXd r = F.F - P.apply(u);
    if (!opts.keep_zero_rows) {
        std::vector<int> keep;
        for (int j = 0; j < M.rows(); ++j)
            if (M.row(j).cwiseAbs().maxCoeff() > 0.0)
                keep.push_back(j);
        Eigen::MatrixXd Mk(keep.size(), M.cols());
        Eigen::VectorXd rk(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            Mk.row(i) = M.row(keep[i]);
            rk(i) = r(keep[i]);
        }
        M = std::move(Mk);
        r = std::move(rk);
    }
    MultiplierSolution sol;
    sol.space = space;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    sol.coef = cod.solve(r);
    if (!sol.coef.allFinite())
        throw NumericalError("multiplier reconstruction produced non-finite values");
    sol.residual = (M * sol.coef - r).norm();
    return sol;
}

MultiplierSolution reconstruct_multiplier(const DiscreteSolution& u, const BoundaryMesh& mesh, const DofMap& dofs,
                                          const SteklovOperator& P, const LoadFunctional& F,
                                          const MultiplierOptions& opts)
{
    return reconstruct_multiplier(u.u, mesh, dofs, P, F, coarsen_multiplier_space(mesh), opts);
}

MultiplierMesh split_multiplier_space(const MultiplierMesh& space)
{
    MultiplierMesh out;
    out.owner.assign(space.owner.size(), -1);
    out.s_start = space.s_start;
    for (const MultiplierElement& me : space.elements) {
        std::vector<int> kids = me.children;
        std::sort(kids.begin(), kids.end(),
                  [&](int a, int b) { return space.s_start[a] < space.s_start[b]; });
        for (std::size_t k = 0; k < kids.size(); ++k) {
            MultiplierElement piece;
            piece.children = {kids[k]};
            piece.q = me.q;
            piece.s0 = space.s_start[kids[k]];
            const double end = (k + 1 < kids.size()) ? space.s_start[kids[k + 1]] : me.s0 + me.length;
            piece.length = end - piece.s0;
            out.owner[kids[k]] = out.size();
            out.elements.push_back(piece);
        }
    }
    return out;
}

double norm_V_on_contact(const MultiplierSolution& a, const MultiplierSolution& b, const BoundaryMesh& geometry,
                         const Material& mat, const QuadratureOptions& opts)
{
    const std::vector<int> chain = contact_chain(geometry);
    if (chain.empty())
        throw DomainError("norm_V_on_contact: geometry has no contact boundary");
    std::vector<double> geo_s{0.0};
    for (int e : chain)
        geo_s.push_back(geo_s.back() + geometry.length(e));
    const double total = geo_s.back();
    for (const MultiplierSolution* m : {&a, &b}) {
        if (m->space.elements.empty())
            continue;
        const auto& last = m->space.elements.back();
        if (std::abs(last.s0 + last.length - total) > 1e-10 * total)
            throw DomainError("norm_V_on_contact: multiplier meshes cover different contact boundaries");
    }

    // breakpoints of the common refinement
    std::vector<double> cuts = geo_s;
    for (const MultiplierSolution* m : {&a, &b})
        for (const auto& me : m->space.elements)
            cuts.push_back(me.s0);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> s;
    for (double c : cuts)
        if (s.empty() || c - s.back() > 1e-12 * total)
            s.push_back(c);
    if (total - s.back() > 1e-12 * total)
        s.push_back(total);
    else
        s.back() = total;

    auto point_at = [&](double t) {
        int k = static_cast<int>(std::upper_bound(geo_s.begin(), geo_s.end(), t) - geo_s.begin()) - 1;
        k = std::clamp(k, 0, static_cast<int>(chain.size()) - 1);
        const double xi = std::clamp(2.0 * (t - geo_s[k]) / (geo_s[k + 1] - geo_s[k]) - 1.0, -1.0, 1.0);
        return std::pair<Vec2, Vec2>(geometry.point(chain[k], xi), geometry.normal(chain[k]));
    };
    auto degree_at = [](const MultiplierSolution& m, double t) {
        for (const auto& me : m.space.elements)
            if (t >= me.s0 && t <= me.s0 + me.length)
                return me.q;
        return 0;
    };

    const int n = static_cast<int>(s.size()) - 1;
    BoundaryMesh sub;
    for (int i = 0; i <= n; ++i)
        sub.vertices.push_back(point_at(s[i]).first);
    TraceSpace space;
    std::vector<double> coef;
    for (int i = 0; i < n; ++i) {
        Element el;
        el.v0 = i;
        el.v1 = i + 1;
        el.part = Part::Contact;
        const double mid = 0.5 * (s[i] + s[i + 1]);
        const int q = std::max(degree_at(a, mid), degree_at(b, mid));
        el.p = q + 1;
        el.uid = i;
        sub.elements.push_back(el);
        space.basis.emplace_back(ShapeFamily::Legendre, q);
        const Vec2 nrm = point_at(mid).second;
        std::vector<int> map;
        const QuadratureRule& rule = gauss_legendre(2 * q + 2);
        for (int k = 0; k <= q; ++k) {
            double c = 0.0;
            for (int j = 0; j < rule.size(); ++j) {
                const double t = s[i] + 0.5 * (rule.points[j] + 1.0) * (s[i + 1] - s[i]);
                c += rule.weights[j] * (a.value_at(t) - b.value_at(t)) * legendre(k, rule.points[j]);
            }
            c *= 0.5 * (2 * k + 1);
            for (int comp = 0; comp < 2; ++comp) {
                map.push_back(space.size++);
                coef.push_back(c * nrm(comp));
            }
        }
        space.map.push_back(map);
    }
    sub.next_uid = n;
    const Eigen::Map<const Eigen::VectorXd> x(coef.data(), static_cast<Eigen::Index>(coef.size()));
    const Eigen::MatrixXd V = assemble_V(sub, space, space, mat, opts);
    const double q = x.dot(V * x);
    if (q < -1e-12 * std::max(1.0, V.cwiseAbs().maxCoeff() * x.squaredNorm()))
        throw DiagnosticsError("single layer form is negative on the contact boundary");
    return std::sqrt(std::max(q, 0.0));
}

} // namespace hembem
