#pragma once

#include "hembem/regularization.hpp"
#include "hembem/steklov.hpp"

#include <Eigen/Core>

#include <memory>
#include <utility>
#include <vector>

namespace hembem {

/// Smooth nonconvex term of the energy with its gradient and a generalized Hessian.
class NonlinearTerm {
public:
    virtual ~NonlinearTerm() = default;
    virtual Eigen::VectorXd gradient(const Eigen::VectorXd& u) const = 0;
    virtual void add_jacobian(const Eigen::VectorXd& u, Eigen::MatrixXd& H) const = 0;
    virtual double energy(const Eigen::VectorXd& u) const = 0;
    /// Same term with another regularization parameter (continuation).
    virtual std::unique_ptr<NonlinearTerm> at_epsilon(double eps) const = 0;
    virtual double epsilon() const = 0;
};

/// J(u) = int_{Gamma_C} S(u_n, eps) ds on a boundary element space.
class ContactLawTerm : public NonlinearTerm {
public:
    ContactLawTerm(const BoundaryMesh& mesh, const DofMap& dofs, RegularizedLaw law, int extra_points = 17);
    Eigen::VectorXd gradient(const Eigen::VectorXd& u) const override;
    void add_jacobian(const Eigen::VectorXd& u, Eigen::MatrixXd& H) const override;
    double energy(const Eigen::VectorXd& u) const override;
    std::unique_ptr<NonlinearTerm> at_epsilon(double eps) const override;
    double epsilon() const override { return law_.epsilon(); }
    const RegularizedLaw& law() const { return law_; }

private:
    const BoundaryMesh& mesh_;
    const DofMap& dofs_;
    RegularizedLaw law_;
    int extra_;
};

/// J(u) = sum_i w_i S(u_{k_i}, eps): a nodal model of the contact term used for small test problems.
class NodalLawTerm : public NonlinearTerm {
public:
    NodalLawTerm(std::vector<int> dofs, std::vector<double> weights, RegularizedLaw law);
    Eigen::VectorXd gradient(const Eigen::VectorXd& u) const override;
    void add_jacobian(const Eigen::VectorXd& u, Eigen::MatrixXd& H) const override;
    double energy(const Eigen::VectorXd& u) const override;
    std::unique_ptr<NonlinearTerm> at_epsilon(double eps) const override;
    double epsilon() const override { return law_.epsilon(); }

private:
    std::vector<int> dofs_;
    std::vector<double> weights_;
    RegularizedLaw law_;
};

/// Row b^T u <= bound with at most a few nonzeros.
struct ConstraintRow {
    std::vector<std::pair<int, double>> coef;
    double bound = 0.0;
    double apply(const Eigen::VectorXd& u) const;
};

struct LinearConstraints {
    std::vector<ConstraintRow> rows;
    int size() const { return static_cast<int>(rows.size()); }
    /// B^T mu.
    Eigen::VectorXd transpose_apply(const Eigen::VectorXd& mu, int n) const;
};

/// (u . n)(P_i) <= gap at all constraint nodes not on the closure of Gamma_D.
LinearConstraints contact_constraints(const BoundaryMesh& mesh, const DofMap& dofs, double gap = 0.0);

struct SolverOptions {
    double tol = 1e-10;
    int max_iter = 200;
    bool continuation = true;
    std::vector<double> continuation_eps = {1e-2, 1e-3};
    /// Scaling of the complementarity function; <= 0 selects the largest diagonal entry of P.
    double complementarity_scale = 0.0;
    int stall_limit = 5;
    int fixed_point_steps = 50;
    bool record_trace = false;
};

struct SolverTraceRow {
    int iteration;
    double residual;
    int active;
    double step;
};

struct DiscreteSolution {
    Eigen::VectorXd u;
    std::vector<bool> active;
    Eigen::VectorXd mu;
    int iterations = 0;
    double residual = 0.0;
    std::vector<SolverTraceRow> trace;
};

/// Relative KKT residual: max of stationarity, feasibility, sign and complementarity defects.
double kkt_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& F, const NonlinearTerm& term,
                    const LinearConstraints& con, const Eigen::VectorXd& u, const Eigen::VectorXd& mu);

/// Solves P u + DJ(u) + B^T mu = F, B u <= g, mu >= 0, mu (B u - g) = 0.
DiscreteSolution solve_regularized(const Eigen::MatrixXd& P, const Eigen::VectorXd& F,
                                   const NonlinearTerm& term, const LinearConstraints& con,
                                   const SolverOptions& opts = {}, const Eigen::VectorXd* u0 = nullptr);

/// Convenience overload for the boundary element problem.
DiscreteSolution solve_regularized(const SteklovOperator& P, const LoadFunctional& F,
                                   const BoundaryMesh& mesh, const DofMap& dofs, const RegularizedLaw& law,
                                   const SolverOptions& opts = {}, const Eigen::VectorXd* u0 = nullptr);

} // namespace hembem
