#pragma once

#include "hembem/mesh.hpp"

namespace hembem {

/// Isotropic material with the Lame-type constants lambda = E nu/(1-nu^2), mu = E/(1+nu).
class Material {
public:
    Material(double E, double nu);
    double E() const { return E_; }
    double nu() const { return nu_; }
    double lambda() const { return E_ * nu_ / (1.0 - nu_ * nu_); }
    double mu() const { return E_ / (1.0 + nu_); }

private:
    double E_, nu_;
};

/// Precomputed constants of the plane Navier-Lame kernels.
struct KernelConstants {
    explicit KernelConstants(const Material& mat);
    double lambda, mu;
    double c1;    ///< (lambda + 3 mu) / (4 pi mu (lambda + 2 mu))
    double c2;    ///< (lambda + mu) / (lambda + 3 mu)
    double hyper; ///< prefactor of the weakly singular kernel of the hypersingular form

    /// Kelvin solution as a function of r = x - y.
    Mat2 single_layer(const Vec2& r) const;
    /// Traction of the Kelvin solution at y with normal ny; row k = load direction.
    Mat2 double_layer(const Vec2& r, const Vec2& ny) const;
    /// Kernel E(r) with <W u, v> = int int v'(x)^T E(x - y) u'(y).
    Mat2 hypersingular(const Vec2& r) const;
};

/// G(x,y) = c1 [ -log|x-y| I + c2 (x-y)(x-y)^T / |x-y|^2 ].
Mat2 fundamental_solution(const Vec2& x, const Vec2& y, const Material& mat);

/// T_y G(x,y) such that (K phi)(x) = int T(x,y) phi(y) ds_y.
Mat2 traction_kernel(const Vec2& x, const Vec2& y, const Vec2& ny, const Material& mat);

Mat2 hypersingular_kernel(const Vec2& x, const Vec2& y, const Material& mat);

} // namespace hembem
