#include "hembem/estimator.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hembem {

namespace {

// <lambda, b_n>_{Gamma_C} for every function of an element-local space.
Eigen::VectorXd multiplier_load(const BoundaryMesh& mesh, const TraceSpace& space, const MultiplierSolution& lambda)
{
    Eigen::VectorXd r = Eigen::VectorXd::Zero(space.size);
    std::vector<double> f;
    for (int e = 0; e < mesh.size(); ++e) {
        if (mesh.elements[e].part != Part::Contact)
            continue;
        const LocalBasis& basis = space.basis[e];
        const std::vector<int>& map = space.map[e];
        const int m = lambda.space.owner[e];
        const int q_deg = m >= 0 ? lambda.space.elements[m].q : 0;
        const QuadratureRule& q = gauss_legendre(basis.polynomial_degree() + q_deg + 2);
        const Vec2 n = mesh.normal(e);
        const double jac = 0.5 * mesh.length(e);
        f.resize(basis.count());
        for (int k = 0; k < q.size(); ++k) {
            basis.evaluate(q.points[k], f.data(), nullptr);
            const double l = lambda.value(e, q.points[k], mesh);
            for (int i = 0; i < basis.count(); ++i)
                for (int c = 0; c < 2; ++c)
                    if (map[2 * i + c] >= 0)
                        r(map[2 * i + c]) += q.weights[k] * jac * l * f[i] * n(c);
        }
    }
    return r;
}

void check_denominator(double d, int e)
{
    if (!(d > 0.0))
        throw DiagnosticsError("enrichment form is not positive on element " + std::to_string(e));
}

} // namespace

std::vector<double> bubble_estimate(const EstimatorInput& in, const Eigen::VectorXd& u,
                                    const MultiplierSolution& lambda)
{
    const BoundaryMesh& mesh = in.mesh;
    const DofMap& dofs = in.dofs;
    const Eigen::VectorXd uf = extend_to_full(dofs, u);
    std::vector<double> eta(mesh.size(), 0.0);

    // displacement bubbles on Gamma_N and Gamma_C
    const TraceSpace bub = bubble_space(mesh, false);
    if (bub.size > 0) {
        const Eigen::MatrixXd Wbf = assemble_W(mesh, bub, dofs.full(), in.material, in.quadrature);
        const Eigen::MatrixXd Wbb = assemble_W(mesh, bub, bub, in.material, in.quadrature);
        const Eigen::MatrixXd Kb = assemble_K(mesh, dofs.density(), bub, in.material, in.quadrature);
        const Eigen::MatrixXd Ib = assemble_I(mesh, dofs.density(), bub);
        const auto& L = in.P.v_factor().matrixL();
        const Eigen::MatrixXd Yb = L.solve(Kb + 0.5 * Ib);
        const Eigen::VectorXd Yu = L.solve((in.bem.K + 0.5 * in.bem.I) * uf);
        const Eigen::VectorXd Pub = Wbf * uf + Yb.transpose() * Yu;
        const Eigen::VectorXd Fb = load_vector(mesh, bub, in.F.traction);
        const Eigen::VectorXd Lb = multiplier_load(mesh, bub, lambda);
        for (int e = 0; e < mesh.size(); ++e)
            for (int j : bub.map[e]) {
                if (j < 0)
                    continue;
                const double d = Wbb(j, j) + Yb.col(j).squaredNorm();
                check_denominator(d, e);
                const double r = Fb(j) - Pub(j) - Lb(j);
                eta[e] += r * r / d;
            }
    }

    // density enrichment on Gamma_D
    const TraceSpace enr = density_enrichment_space(mesh);
    if (enr.size > 0) {
        const Eigen::MatrixXd Ve = assemble_V(mesh, enr, dofs.density(), in.material, in.quadrature);
        const Eigen::MatrixXd Vee = assemble_V(mesh, enr, enr, in.material, in.quadrature);
        const Eigen::MatrixXd Ke = assemble_K(mesh, enr, dofs.full(), in.material, in.quadrature);
        const Eigen::MatrixXd Ie = assemble_I(mesh, enr, dofs.full());
        const Eigen::VectorXd psi = in.P.density(u);
        const Eigen::VectorXd r = (Ke + 0.5 * Ie) * uf - Ve * psi;
        for (int e = 0; e < mesh.size(); ++e)
            for (int j : enr.map[e]) {
                if (j < 0)
                    continue;
                check_denominator(Vee(j, j), e);
                eta[e] += r(j) * r(j) / Vee(j, j);
            }
    }
    return eta;
}

ContactDensity contact_density(double un_minus_g, double lambda_minus_sx, double h, double p,
                               NormScaling scaling)
{
    const double pen = std::max(un_minus_g, 0.0);
    const double cons = std::min(lambda_minus_sx, 0.0);
    const double fine = h / p, coarse = p / h;
    const bool dual = scaling == NormScaling::Dual;
    return {(dual ? coarse : fine) * pen * pen, (dual ? fine : coarse) * cons * cons,
            std::max(lambda_minus_sx, 0.0) * std::max(-un_minus_g, 0.0)};
}

std::vector<IndicatorRecord> contact_indicators(const EstimatorInput& in, const Eigen::VectorXd& u,
                                                const MultiplierSolution& lambda, int extra_points)
{
    const BoundaryMesh& mesh = in.mesh;
    std::vector<IndicatorRecord> out(mesh.size());
    for (int e = 0; e < mesh.size(); ++e) {
        out[e].element = e;
        if (mesh.elements[e].part != Part::Contact)
            continue;
        const int p = mesh.elements[e].p;
        const double h = mesh.length(e);
        const Vec2 n = mesh.normal(e);
        const QuadratureRule& q = gauss_legendre(contact_quadrature_points(p, extra_points));
        double pen = 0.0, cons = 0.0, comp = 0.0;
        for (int k = 0; k < q.size(); ++k) {
            const double un = evaluate_trace(in.dofs.reduced(), u, e, q.points[k]).dot(n);
            const double l = lambda.value(e, q.points[k], mesh);
            const ContactDensity d = contact_density(un - in.gap, l - in.law.deriv(un), h, p, in.scaling);
            const double w = q.weights[k] * 0.5 * h;
            pen += w * d.penetration;
            cons += w * d.consistency;
            comp += w * d.complementarity;
        }
        out[e].penetration = pen;
        out[e].consistency = cons;
        out[e].complementarity = std::abs(comp);
    }
    return out;
}

std::vector<IndicatorRecord> compute_indicators(const EstimatorInput& in, const Eigen::VectorXd& u,
                                                const MultiplierSolution& lambda)
{
    std::vector<IndicatorRecord> rec = contact_indicators(in, u, lambda);
    const std::vector<double> b = bubble_estimate(in, u, lambda);
    for (std::size_t e = 0; e < rec.size(); ++e)
        rec[e].bubble = b[e];
    return rec;
}

EstimateTotals total_estimate(const std::vector<IndicatorRecord>& indicators)
{
    EstimateTotals t;
    for (const auto& r : indicators) {
        t.bubble += r.bubble;
        t.penetration += r.penetration;
        t.consistency += r.consistency;
        t.complementarity += r.complementarity;
    }
    t.total = t.bubble + t.penetration + t.consistency + t.complementarity;
    return t;
}

} // namespace hembem
