#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "hembem/quadrature.hpp"
#include "hembem/regularization.hpp"
#include "hembem/steklov.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

/// Small obstacle problem: min 1/2 u^T P u - F^T u + sum_i w_i S(u_{law[i]}) with u_{law[i]} <= gap.
struct SmallProblem {
    Eigen::MatrixXd P;
    Eigen::VectorXd F;
    std::vector<int> law;
    std::vector<double> weights;
    double gap = 0.0;
};

/// SPD matrix with eigenvalues drawn from [lo, hi].
inline Eigen::MatrixXd random_spd(int n, double lo, double hi, std::mt19937& rng)
{
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A(i, j) = g(rng);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i)
        d(i) = u(rng);
    return Q * d.asDiagonal() * Q.transpose();
}

/// Minimizer by exhaustive search over the law dofs (at most two) with the free dofs
/// eliminated exactly; a coarse grid is followed by a zoomed grid around the best point.
inline Eigen::VectorXd grid_minimizer(const SmallProblem& pb, const hembem::RegularizedLaw& law, double lo,
                                      int points = 1001)
{
    const int n = static_cast<int>(pb.F.size());
    const int k = static_cast<int>(pb.law.size());
    std::vector<int> free;
    for (int i = 0; i < n; ++i)
        if (std::find(pb.law.begin(), pb.law.end(), i) == pb.law.end())
            free.push_back(i);
    const int r = static_cast<int>(free.size());
    Eigen::MatrixXd PLL(k, k), PLR(k, r), PRR(r, r);
    Eigen::VectorXd FL(k), FR(r);
    for (int a = 0; a < k; ++a) {
        FL(a) = pb.F(pb.law[a]);
        for (int b = 0; b < k; ++b)
            PLL(a, b) = pb.P(pb.law[a], pb.law[b]);
        for (int b = 0; b < r; ++b)
            PLR(a, b) = pb.P(pb.law[a], free[b]);
    }
    for (int a = 0; a < r; ++a) {
        FR(a) = pb.F(free[a]);
        for (int b = 0; b < r; ++b)
            PRR(a, b) = pb.P(free[a], free[b]);
    }
    Eigen::MatrixXd S = PLL;
    Eigen::VectorXd G = FL;
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    if (r > 0) {
        ldlt.compute(PRR);
        S -= PLR * ldlt.solve(PLR.transpose());
        G -= PLR * ldlt.solve(FR);
    }
    auto energy = [&](const Eigen::VectorXd& z) {
        double e = 0.5 * z.dot(S * z) - G.dot(z);
        for (int a = 0; a < k; ++a)
            e += pb.weights[a] * law.value(z(a));
        return e;
    };

    Eigen::VectorXd best = Eigen::VectorXd::Constant(k, pb.gap);
    double a0 = lo, a1 = pb.gap;
    std::vector<double> lo_k(k, a0), hi_k(k, a1);
    for (int pass = 0; pass < 3; ++pass) {
        double best_e = std::numeric_limits<double>::infinity();
        Eigen::VectorXd z(k);
        std::vector<int> idx(k, 0);
        while (true) {
            for (int a = 0; a < k; ++a)
                z(a) = lo_k[a] + (hi_k[a] - lo_k[a]) * idx[a] / (points - 1);
            const double e = energy(z);
            if (e < best_e) {
                best_e = e;
                best = z;
            }
            int a = 0;
            while (a < k && ++idx[a] == points)
                idx[a++] = 0;
            if (a == k)
                break;
        }
        for (int a = 0; a < k; ++a) {
            const double h = (hi_k[a] - lo_k[a]) / (points - 1);
            lo_k[a] = std::max(lo, best(a) - 2 * h);
            hi_k[a] = std::min(pb.gap, best(a) + 2 * h);
        }
    }

    Eigen::VectorXd u(n);
    for (int a = 0; a < k; ++a)
        u(pb.law[a]) = best(a);
    if (r > 0) {
        const Eigen::VectorXd uR = ldlt.solve(FR - PLR.transpose() * best);
        for (int a = 0; a < r; ++a)
            u(free[a]) = uR(a);
    }
    return u;
}

/// Slope of the least-squares line through (x_i, y_i).
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

/// Discrete Dirichlet-to-Neumann defect of the Kelvin field u = G(., x0) c with x0 outside the square:
/// the functional e_j = (P_full u_I)_j - <sigma(u) n, phi_j> on the reduced test space, measured in the
/// L2 norm of its Riesz representative, sqrt(e^T M^{-1} e).
inline double dtn_defect(const hembem::BoundaryMesh& mesh, const hembem::DofMap& dofs,
                         const hembem::SteklovOperator& P, const hembem::Material& mat,
                         const hembem::Vec2& x0 = hembem::Vec2(-0.3, 0.7),
                         const hembem::Vec2& c = hembem::Vec2(1.0, -0.5))
{
    using namespace hembem;
    const Eigen::VectorXd uI
        = interpolate_full(dofs, [&](const Vec2& x) { return Vec2(fundamental_solution(x, x0, mat) * c); });
    const Eigen::VectorXd Pu = P.full_matrix() * uI;
    Eigen::VectorXd e(dofs.n_reduced());
    for (int i = 0; i < e.size(); ++i)
        e(i) = Pu(dofs.full_of_reduced()[i]);
    const TraceSpace& sp = dofs.reduced();
    std::vector<double> phi(64);
    for (int el = 0; el < mesh.size(); ++el) {
        const LocalBasis& b = sp.basis[el];
        const QuadratureRule& q = gauss_legendre(b.polynomial_degree() + 20);
        for (int k = 0; k < q.size(); ++k) {
            const Vec2 y = mesh.point(el, q.points[k]);
            // traction of the field at y: the kernel row k is the traction of G e_k
            const Vec2 t = traction_kernel(x0, y, mesh.normal(el), mat).transpose() * c;
            b.evaluate(q.points[k], phi.data(), nullptr);
            const double w = q.weights[k] * 0.5 * mesh.length(el);
            for (int j = 0; j < b.count(); ++j)
                for (int comp = 0; comp < 2; ++comp) {
                    const int idx = sp.map[el][2 * j + comp];
                    if (idx >= 0)
                        e(idx) -= w * t(comp) * phi[j];
                }
        }
    }
    const Eigen::MatrixXd M = assemble_I(mesh, sp, sp);
    return std::sqrt(e.dot(M.ldlt().solve(e)));
}

} // namespace oracle
