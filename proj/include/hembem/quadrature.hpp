#pragma once

#include <vector>

namespace hembem {

struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;
    int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule on [-1,1].
const QuadratureRule& gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped affinely to [a,b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// n-point Gauss rule on (0,1) for the weight -log(x).
/// Integrates f(x)(-log x) exactly for polynomials f of degree <= 2n-1.
const QuadratureRule& gauss_log(int n);

/// Legendre polynomial L_n(x) and its derivative.
double legendre(int n, double x);
void legendre_with_derivative(int n, double x, double& value, double& derivative);

/// Gauss-Lobatto points of degree p: the p+1 roots of (1-x^2) L_p'(x), increasing.
std::vector<double> gauss_lobatto_nodes(int p);

} // namespace hembem
