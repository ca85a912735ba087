#include "hembem/vi_solver.hpp"

#include "hembem/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace hembem {

ContactLawTerm::ContactLawTerm(const BoundaryMesh& mesh, const DofMap& dofs, RegularizedLaw law, int extra_points)
    : mesh_(mesh), dofs_(dofs), law_(std::move(law)), extra_(extra_points)
{
}

Eigen::VectorXd ContactLawTerm::gradient(const Eigen::VectorXd& u) const
{
    return assemble_DJ(u, mesh_, dofs_, law_, extra_);
}

void ContactLawTerm::add_jacobian(const Eigen::VectorXd& u, Eigen::MatrixXd& H) const
{
    H += assemble_DJ_jacobian(u, mesh_, dofs_, law_, extra_);
}

double ContactLawTerm::energy(const Eigen::VectorXd& u) const
{
    return assemble_J(u, mesh_, dofs_, law_, extra_);
}

std::unique_ptr<NonlinearTerm> ContactLawTerm::at_epsilon(double eps) const
{
    return std::make_unique<ContactLawTerm>(mesh_, dofs_, law_.with_epsilon(eps), extra_);
}

NodalLawTerm::NodalLawTerm(std::vector<int> dofs, std::vector<double> weights, RegularizedLaw law)
    : dofs_(std::move(dofs)), weights_(std::move(weights)), law_(std::move(law))
{
    if (dofs_.size() != weights_.size())
        throw DomainError("nodal law: dofs and weights differ in length");
}

Eigen::VectorXd NodalLawTerm::gradient(const Eigen::VectorXd& u) const
{
    Eigen::VectorXd g = Eigen::VectorXd::Zero(u.size());
    for (std::size_t i = 0; i < dofs_.size(); ++i)
        g(dofs_[i]) += weights_[i] * law_.deriv(u(dofs_[i]));
    return g;
}

void NodalLawTerm::add_jacobian(const Eigen::VectorXd& u, Eigen::MatrixXd& H) const
{
    for (std::size_t i = 0; i < dofs_.size(); ++i)
        H(dofs_[i], dofs_[i]) += weights_[i] * law_.second(u(dofs_[i]));
}

double NodalLawTerm::energy(const Eigen::VectorXd& u) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < dofs_.size(); ++i)
        s += weights_[i] * law_.value(u(dofs_[i]));
    return s;
}

std::unique_ptr<NonlinearTerm> NodalLawTerm::at_epsilon(double eps) const
{
    return std::make_unique<NodalLawTerm>(dofs_, weights_, law_.with_epsilon(eps));
}

double ConstraintRow::apply(const Eigen::VectorXd& u) const
{
    double s = 0.0;
    for (const auto& [j, b] : coef)
        s += b * u(j);
    return s;
}

Eigen::VectorXd LinearConstraints::transpose_apply(const Eigen::VectorXd& mu, int n) const
{
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < size(); ++i)
        for (const auto& [j, b] : rows[i].coef)
            r(j) += b * mu(i);
    return r;
}

LinearConstraints contact_constraints(const BoundaryMesh& mesh, const DofMap& dofs, double gap)
{
    std::vector<bool> dirichlet_vertex(mesh.vertices.size(), false);
    for (const Element& el : mesh.elements)
        if (el.part == Part::Dirichlet)
            dirichlet_vertex[el.v0] = dirichlet_vertex[el.v1] = true;

    LinearConstraints con;
    std::vector<double> f;
    for (const ConstraintNode& node : constraint_node_set(mesh)) {
        const Element& el = mesh.elements[node.element];
        if ((node.xi == -1.0 && dirichlet_vertex[el.v0]) || (node.xi == 1.0 && dirichlet_vertex[el.v1]))
            continue;
        const LocalBasis& basis = dofs.reduced().basis[node.element];
        const std::vector<int>& map = dofs.reduced().map[node.element];
        const Vec2 n = mesh.normal(node.element);
        f.resize(basis.count());
        basis.evaluate(node.xi, f.data(), nullptr);
        ConstraintRow row;
        row.bound = gap;
        for (int i = 0; i < basis.count(); ++i) {
            if (std::abs(f[i]) < 1e-13)
                continue;
            for (int c = 0; c < 2; ++c)
                if (map[2 * i + c] >= 0 && n(c) != 0.0)
                    row.coef.emplace_back(map[2 * i + c], f[i] * n(c));
        }
        if (!row.coef.empty())
            con.rows.push_back(std::move(row));
    }
    return con;
}

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd constraint_slack(const LinearConstraints& con, const Eigen::VectorXd& u)
{
    Eigen::VectorXd s(con.size());
    for (int i = 0; i < con.size(); ++i)
        s(i) = con.rows[i].apply(u) - con.rows[i].bound;
    return s;
}

struct Residuals {
    Eigen::VectorXd stationarity;
    Eigen::VectorXd complementarity;
    double merit() const { return 0.5 * (stationarity.squaredNorm() + complementarity.squaredNorm()); }
};

class Newton {
public:
    Newton(const Eigen::MatrixXd& P, const Eigen::VectorXd& F, const LinearConstraints& con, double c,
           const SolverOptions& opts, DiscreteSolution& sol)
        : P_(P), F_(F), con_(con), c_(c), opts_(opts), sol_(sol)
    {
    }

    Residuals residuals(const NonlinearTerm& term, const Eigen::VectorXd& u, const Eigen::VectorXd& mu) const
    {
        Residuals r;
        r.stationarity = P_ * u + term.gradient(u) + con_.transpose_apply(mu, static_cast<int>(u.size())) - F_;
        const Eigen::VectorXd slack = constraint_slack(con_, u);
        r.complementarity.resize(con_.size());
        for (int i = 0; i < con_.size(); ++i)
            r.complementarity(i) = mu(i) - std::max(0.0, mu(i) + c_ * slack(i));
        return r;
    }

    /// Runs semismooth Newton steps on one term until the residual drops below tol.
    double run(const NonlinearTerm& term, double tol, bool frozen_fallback)
    {
        int stalls = 0;
        while (true) {
            const double res = kkt_residual(P_, F_, term, con_, sol_.u, sol_.mu);
            if (res <= tol)
                return res;
            if (sol_.iterations >= opts_.max_iter)
                return res;
            if (frozen_fallback && stalls >= opts_.stall_limit) {
                fixed_point(term, tol);
                stalls = 0;
                continue;
            }
            const double alpha = step(term, term.gradient(sol_.u), true);
            if (alpha < 1.0 / 16.0)
                ++stalls;
            else
                stalls = 0;
        }
    }

private:
    // One Newton step; with_jacobian = false keeps the law gradient frozen at grad.
    double step(const NonlinearTerm& term, const Eigen::VectorXd& grad, bool with_jacobian)
    {
        Eigen::VectorXd& u = sol_.u;
        Eigen::VectorXd& mu = sol_.mu;
        const int n = static_cast<int>(u.size());
        const Eigen::VectorXd slack = constraint_slack(con_, u);
        std::vector<int> active;
        for (int i = 0; i < con_.size(); ++i)
            if (mu(i) + c_ * slack(i) > 0.0)
                active.push_back(i);
        const int m = static_cast<int>(active.size());

        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
        K.topLeftCorner(n, n) = P_;
        if (with_jacobian) {
            Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
            term.add_jacobian(u, J);
            K.topLeftCorner(n, n) += J;
        }
        Eigen::VectorXd rhs(n + m);
        rhs.head(n) = F_ - P_ * u - grad;
        for (int a = 0; a < m; ++a) {
            const ConstraintRow& row = con_.rows[active[a]];
            for (const auto& [j, b] : row.coef) {
                K(n + a, j) += b;
                K(j, n + a) += b;
            }
            rhs(n + a) = -slack(active[a]);
        }
        const Eigen::VectorXd x = K.partialPivLu().solve(rhs);
        if (!x.allFinite())
            throw NumericalError("Newton system produced non-finite values");
        const Eigen::VectorXd du = x.head(n);
        Eigen::VectorXd mu_new = Eigen::VectorXd::Zero(con_.size());
        for (int a = 0; a < m; ++a)
            mu_new(active[a]) = x(n + a);
        const Eigen::VectorXd dmu = mu_new - mu;

        double alpha = 1.0;
        if (with_jacobian) {
            const double phi0 = residuals(term, u, mu).merit();
            bool accepted = false;
            for (int k = 0; k < 12; ++k, alpha *= 0.5) {
                if (residuals(term, u + alpha * du, mu + alpha * dmu).merit() <= (1.0 - 2e-4 * alpha) * phi0) {
                    accepted = true;
                    break;
                }
            }
            // Take a short step when backtracking finds no decrease; the stall counter triggers the fallback.
            if (!accepted)
                alpha = 1.0 / 64.0;
        }
        u += alpha * du;
        mu += alpha * dmu;
        ++sol_.iterations;
        if (opts_.record_trace) {
            const double res = kkt_residual(P_, F_, term, con_, u, mu);
            sol_.trace.push_back({sol_.iterations, res, m, alpha});
        }
        return alpha;
    }

    // Lagged law gradient: each outer step solves a linear complementarity problem by active sets.
    void fixed_point(const NonlinearTerm& term, double tol)
    {
        for (int k = 0; k < opts_.fixed_point_steps && sol_.iterations < opts_.max_iter; ++k) {
            const Eigen::VectorXd grad = term.gradient(sol_.u);
            for (int inner = 0; inner < 30; ++inner) {
                step(term, grad, false);
                const Eigen::VectorXd slack = constraint_slack(con_, sol_.u);
                bool consistent = true;
                for (int i = 0; i < con_.size() && consistent; ++i)
                    consistent = sol_.mu(i) >= -1e-14 * (1.0 + inf_norm(sol_.mu)) &&
                                 slack(i) <= 1e-14 * (1.0 + inf_norm(sol_.u));
                if (consistent || sol_.iterations >= opts_.max_iter)
                    break;
            }
            if (kkt_residual(P_, F_, term, con_, sol_.u, sol_.mu) <= tol)
                return;
        }
    }

    const Eigen::MatrixXd& P_;
    const Eigen::VectorXd& F_;
    const LinearConstraints& con_;
    double c_;
    const SolverOptions& opts_;
    DiscreteSolution& sol_;
};

} // namespace

double kkt_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& F, const NonlinearTerm& term,
                    const LinearConstraints& con, const Eigen::VectorXd& u, const Eigen::VectorXd& mu)
{
    const Eigen::VectorXd Pu = P * u;
    double sF = std::max(inf_norm(F), inf_norm(Pu));
    if (sF == 0.0)
        sF = 1.0;
    double su = inf_norm(u);
    if (su == 0.0)
        su = 1.0;
    const Eigen::VectorXd s = Pu + term.gradient(u) + con.transpose_apply(mu, static_cast<int>(u.size())) - F;
    double res = inf_norm(s) / sF;
    const Eigen::VectorXd slack = constraint_slack(con, u);
    for (int i = 0; i < con.size(); ++i) {
        res = std::max(res, std::max(0.0, slack(i)) / su);
        res = std::max(res, std::max(0.0, -mu(i)) / sF);
        res = std::max(res, std::abs(mu(i) * slack(i)) / (sF * su));
    }
    return res;
}

DiscreteSolution solve_regularized(const Eigen::MatrixXd& P, const Eigen::VectorXd& F,
                                   const NonlinearTerm& term, const LinearConstraints& con,
                                   const SolverOptions& opts, const Eigen::VectorXd* u0)
{
    const int n = static_cast<int>(F.size());
    if (P.rows() != n || P.cols() != n)
        throw DomainError("solve_regularized: operator and load sizes differ");
    for (const auto& row : con.rows)
        for (const auto& [j, b] : row.coef)
            if (j < 0 || j >= n)
                throw DomainError("solve_regularized: constraint refers to an unknown dof");

    DiscreteSolution sol;
    sol.u = u0 ? *u0 : Eigen::VectorXd::Zero(n);
    if (sol.u.size() != n)
        throw DomainError("solve_regularized: initial guess has the wrong size");
    sol.mu = Eigen::VectorXd::Zero(con.size());

    double c = opts.complementarity_scale;
    if (c <= 0.0)
        c = std::max(P.diagonal().cwiseAbs().maxCoeff(), 1e-300);

    std::vector<double> schedule;
    if (opts.continuation)
        for (double e : opts.continuation_eps)
            if (e > term.epsilon())
                schedule.push_back(e);
    Newton newton(P, F, con, c, opts, sol);
    for (double e : schedule) {
        const auto stage = term.at_epsilon(e);
        newton.run(*stage, std::max(opts.tol, 1e-8), true);
    }
    sol.residual = newton.run(term, opts.tol, true);
    if (sol.residual > opts.tol)
        throw NonConvergenceError("regularized problem did not converge within " +
                                      std::to_string(opts.max_iter) + " iterations",
                                  sol.residual);

    const Eigen::VectorXd slack = constraint_slack(con, sol.u);
    sol.active.resize(con.size());
    for (int i = 0; i < con.size(); ++i)
        sol.active[i] = sol.mu(i) + c * slack(i) > 0.0;
    return sol;
}

DiscreteSolution solve_regularized(const SteklovOperator& P, const LoadFunctional& F, const BoundaryMesh& mesh,
                                   const DofMap& dofs, const RegularizedLaw& law, const SolverOptions& opts,
                                   const Eigen::VectorXd* u0)
{
    const ContactLawTerm term(mesh, dofs, law);
    const LinearConstraints con = contact_constraints(mesh, dofs, 0.0);
    return solve_regularized(P.matrix(), F.F, term, con, opts, u0);
}

} // namespace hembem
