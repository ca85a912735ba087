#pragma once

#include "hembem/dofs.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace hembem {

/// Smoothed plus function for the Zang density: 0, (t + eps/2)^2 / (2 eps), t on the three branches.
double plus_smooth(double t, double eps);
double plus_smooth_deriv(double t, double eps);
/// 1/eps on [-eps/2, eps/2), 0 elsewhere (right-branch value at the kinks).
double plus_smooth_second(double t, double eps);

enum class LawMode { Max, Min };

/// g(y) = (a/2) y^2 + c y + d.
struct QuadraticPiece {
    double a = 0.0, c = 0.0, d = 0.0;
    double value(double y) const { return 0.5 * a * y * y + c * y + d; }
    double slope(double y) const { return a * y + c; }
};

/// Piecewise quadratic max/min law evaluated at y = arg_offset + arg_scale * x.
struct LawSpec {
    LawMode mode = LawMode::Max;
    std::vector<QuadraticPiece> pieces;
    double arg_scale = 1.0;
    double arg_offset = 0.0;

    void validate() const;
    double argument(double x) const { return arg_offset + arg_scale * x; }
    /// Exact nonsmooth law f(x).
    double exact(double x) const;
};

/// Three-piece sawtooth on the opening y = -u_n: teeth of height A1 at t1 and A2 at t2.
LawSpec delamination_law(double A1, double A2, double t1, double t2);

/// Three-piece delamination law on the opening y = g - u_n with g = 0 (A1 = 0.05, A2 = 0.03,
/// t1 = 0.02, t2 = 0.04), evaluated as a function of u_n.
LawSpec benchmark_law();

enum class Density { Zang };

/// The law smoothed by nested plus-function regularization.
class RegularizedLaw {
public:
    RegularizedLaw(LawSpec spec, double eps, Density density = Density::Zang);

    const LawSpec& spec() const { return spec_; }
    double epsilon() const { return eps_; }
    RegularizedLaw with_epsilon(double eps) const { return RegularizedLaw(spec_, eps, density_); }

    double value(double x) const;       ///< S(x, eps)
    double deriv(double x) const;       ///< S_x(x, eps)
    double second(double x) const;      ///< generalized S_xx(x, eps)
    /// Convex weights Lambda_i with dS/dy = sum Lambda_i g_i'(y) (max form on the mapped pieces).
    std::vector<double> weights(double x) const;

private:
    struct Eval {
        double value, slope, curvature;
    };
    Eval evaluate_max(double y, bool negate) const;

    LawSpec spec_;
    double eps_;
    Density density_;
};

double smooth_value(const RegularizedLaw& law, double x);
double smooth_deriv(const RegularizedLaw& law, double x);

/// Minimum over random pairs in [-radius, radius] of (S_x(x1) - S_x(x2))(x1 - x2) / |x1 - x2|^2.
double check_uniqueness_bound(const RegularizedLaw& law, int n_samples, double radius,
                              std::uint64_t seed = 1);

/// Gauss points per contact element used for the law integrals: ceil(p) + extra.
inline int contact_quadrature_points(int p, int extra = 17) { return p + extra; }

/// <DJ(u), phi_j> = int_{Gamma_C} S_x(u_n) (phi_j)_n over the reduced dofs.
Eigen::VectorXd assemble_DJ(const Eigen::VectorXd& u, const BoundaryMesh& mesh, const DofMap& dofs,
                            const RegularizedLaw& law, int extra_points = 17);

/// int_{Gamma_C} S_xx(u_n) (phi_i)_n (phi_j)_n.
Eigen::MatrixXd assemble_DJ_jacobian(const Eigen::VectorXd& u, const BoundaryMesh& mesh,
                                     const DofMap& dofs, const RegularizedLaw& law,
                                     int extra_points = 17);

/// J(u) = int_{Gamma_C} S(u_n).
double assemble_J(const Eigen::VectorXd& u, const BoundaryMesh& mesh, const DofMap& dofs,
                  const RegularizedLaw& law, int extra_points = 17);

} // namespace hembem
