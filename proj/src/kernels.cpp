#include "hembem/kernels.hpp"

#include "hembem/error.hpp"

#include <cmath>
#include <numbers>

namespace hembem {

Material::Material(double E, double nu) : E_(E), nu_(nu)
{
    if (!(E > 0.0))
        throw ConfigError("material: E must be positive");
    if (!(nu > 0.0 && nu < 0.5))
        throw ConfigError("material: nu must lie in (0, 0.5)");
}

KernelConstants::KernelConstants(const Material& mat) : lambda(mat.lambda()), mu(mat.mu())
{
    c1 = (lambda + 3.0 * mu) / (4.0 * std::numbers::pi * mu * (lambda + 2.0 * mu));
    c2 = (lambda + mu) / (lambda + 3.0 * mu);
    hyper = 4.0 * mu * mu * c1 * c2;
}

Mat2 KernelConstants::single_layer(const Vec2& r) const
{
    const double rho2 = r.squaredNorm();
    const double lg = -0.5 * std::log(rho2);
    Mat2 g;
    g(0, 0) = c1 * (lg + c2 * r.x() * r.x() / rho2);
    g(1, 1) = c1 * (lg + c2 * r.y() * r.y() / rho2);
    g(0, 1) = g(1, 0) = c1 * c2 * r.x() * r.y() / rho2;
    return g;
}

Mat2 KernelConstants::double_layer(const Vec2& r, const Vec2& n) const
{
    // Stress of the displacement field y -> G(x,y) e_k, contracted with n.
    const double rho2 = r.squaredNorm();
    const double rn = r.dot(n);
    const double a = lambda * c1 * (1.0 - c2) / rho2;
    const double b = -mu * c1 / rho2;
    const double d = 4.0 * c2 * rn / rho2;
    Mat2 t;
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            const double delta = (i == k) ? 1.0 : 0.0;
            const double s = (c2 - 1.0) * (delta * rn + n(k) * r(i)) + 2.0 * c2 * n(i) * r(k)
                             - d * r(i) * r(k);
            t(k, i) = a * r(k) * n(i) + b * s;
        }
    }
    return t;
}

Mat2 KernelConstants::hypersingular(const Vec2& r) const
{
    const double rho2 = r.squaredNorm();
    const double lg = -0.5 * std::log(rho2);
    Mat2 e;
    e(0, 0) = hyper * (lg + r.x() * r.x() / rho2);
    e(1, 1) = hyper * (lg + r.y() * r.y() / rho2);
    e(0, 1) = e(1, 0) = hyper * r.x() * r.y() / rho2;
    return e;
}

namespace {
void require_distinct(const Vec2& x, const Vec2& y, const char* what)
{
    if (x == y)
        throw DomainError(std::string(what) + ": coincident points");
}
} // namespace

Mat2 fundamental_solution(const Vec2& x, const Vec2& y, const Material& mat)
{
    require_distinct(x, y, "fundamental_solution");
    return KernelConstants(mat).single_layer(x - y);
}

Mat2 traction_kernel(const Vec2& x, const Vec2& y, const Vec2& ny, const Material& mat)
{
    require_distinct(x, y, "traction_kernel");
    if (std::abs(ny.norm() - 1.0) > 1e-12)
        throw DomainError("traction_kernel: normal must have unit length");
    return KernelConstants(mat).double_layer(x - y, ny);
}

Mat2 hypersingular_kernel(const Vec2& x, const Vec2& y, const Material& mat)
{
    require_distinct(x, y, "hypersingular_kernel");
    return KernelConstants(mat).hypersingular(x - y);
}

} // namespace hembem
