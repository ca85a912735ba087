#pragma once

#include <vector>

namespace hembem {

/// Families of element-local scalar shape functions on the reference interval [-1,1].
enum class ShapeFamily {
    Lobatto,   ///< continuous nodal Lagrange basis on Gauss-Lobatto points, degree d (d+1 functions)
    Legendre,  ///< discontinuous Legendre modes L_0..L_d (d+1 functions)
    Bubble,    ///< single interior mode L_{d+1} - L_{d-1}
    Mode       ///< single Legendre mode L_d
};

/// Element-local basis: a family together with its degree parameter.
class LocalBasis {
public:
    LocalBasis() = default;
    LocalBasis(ShapeFamily family, int degree);

    ShapeFamily family() const { return family_; }
    int degree() const { return degree_; }
    int count() const;
    /// Highest polynomial degree among the functions (quadrature sizing).
    int polynomial_degree() const;

    /// Values and reference derivatives d/dxi of all functions at xi. Either output may be null.
    void evaluate(double xi, double* values, double* derivatives) const;

private:
    ShapeFamily family_ = ShapeFamily::Lobatto;
    int degree_ = 1;
    const std::vector<double>* nodes_ = nullptr;
    const std::vector<double>* bary_ = nullptr;
};

} // namespace hembem
