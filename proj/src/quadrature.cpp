#include "hembem/quadrature.hpp"

#include "hembem/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace hembem {

namespace {

QuadratureRule compute_gauss_legendre(int n)
{
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double value = 0.0, derivative = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_with_derivative(n, x, value, derivative);
            const double dx = value / derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        legendre_with_derivative(n, x, value, derivative);
        rule.points[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
    }
    return rule;
}

// Modified Chebyshev algorithm with shifted Legendre moments, then Golub-Welsch.
QuadratureRule compute_gauss_log(int n)
{
    const int m = 2 * n;
    std::vector<double> nu(m), a(m, 0.5), b(m, 0.0);
    nu[0] = 1.0;
    double ratio = 1.0; // (k!)^2 / (2k)!
    for (int k = 1; k < m; ++k) {
        ratio *= static_cast<double>(k) * k / ((2.0 * k - 1.0) * (2.0 * k));
        nu[k] = ((k % 2) ? -1.0 : 1.0) / (static_cast<double>(k) * (k + 1)) * ratio;
        b[k] = static_cast<double>(k) * k / (4.0 * (4.0 * k * k - 1.0));
    }

    std::vector<double> alpha(n), beta(n);
    std::vector<double> sig_prev(m + 1, 0.0), sig(nu.begin(), nu.end()), sig_next(m + 1, 0.0);
    sig.resize(m + 1, 0.0);
    alpha[0] = a[0] + nu[1] / nu[0];
    beta[0] = nu[0];
    for (int k = 1; k < n; ++k) {
        for (int l = k; l <= m - k - 1; ++l) {
            sig_next[l] = sig[l + 1] - (alpha[k - 1] - a[l]) * sig[l] - beta[k - 1] * sig_prev[l]
                          + b[l] * sig[l - 1];
        }
        alpha[k] = a[k] + sig_next[k + 1] / sig_next[k] - sig[k] / sig[k - 1];
        beta[k] = sig_next[k] / sig[k - 1];
        sig_prev.swap(sig);
        sig.swap(sig_next);
    }

    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        jacobi(k, k) = alpha[k];
        if (k + 1 < n) {
            jacobi(k, k + 1) = std::sqrt(beta[k + 1]);
            jacobi(k + 1, k) = jacobi(k, k + 1);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    if (eig.info() != Eigen::Success)
        throw NumericalError("gauss_log: eigenvalue problem failed");
    QuadratureRule rule;
    for (int k = 0; k < n; ++k) {
        const double v = eig.eigenvectors()(0, k);
        rule.points.push_back(eig.eigenvalues()(k));
        rule.weights.push_back(beta[0] * v * v);
    }
    return rule;
}

template <class Compute>
const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& mutex, int n,
                             Compute&& compute)
{
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute(n)).first;
    return it->second;
}

} // namespace

void legendre_with_derivative(int n, double x, double& value, double& derivative)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        value = 1.0;
        derivative = 0.0;
        return;
    }
    double d0 = 0.0, d1 = 1.0;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        const double d2 = d0 + (2.0 * k - 1.0) * p1;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    value = p1;
    derivative = d1;
}

double legendre(int n, double x)
{
    double v, d;
    legendre_with_derivative(n, x, v, d);
    return v;
}

const QuadratureRule& gauss_legendre(int n)
{
    if (n < 1)
        throw DomainError("gauss_legendre: need at least one point");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    return cached(cache, mutex, n, compute_gauss_legendre);
}

QuadratureRule gauss_legendre(int n, double a, double b)
{
    QuadratureRule rule = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        rule.points[i] = mid + half * rule.points[i];
        rule.weights[i] *= half;
    }
    return rule;
}

const QuadratureRule& gauss_log(int n)
{
    if (n < 1 || n > 40)
        throw DomainError("gauss_log: supported point counts are 1..40");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    return cached(cache, mutex, n, compute_gauss_log);
}

std::vector<double> gauss_lobatto_nodes(int p)
{
    if (p < 1)
        throw DomainError("gauss_lobatto_nodes: degree must be >= 1");
    std::vector<double> nodes(p + 1);
    nodes[0] = -1.0;
    nodes[p] = 1.0;
    for (int k = 1; k < p; ++k) {
        double x = -std::cos(std::numbers::pi * k / p);
        for (int it = 0; it < 100; ++it) {
            double value, derivative;
            legendre_with_derivative(p, x, value, derivative);
            const double second = (2.0 * x * derivative - p * (p + 1.0) * value) / (1.0 - x * x);
            const double dx = derivative / second;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        nodes[k] = x;
    }
    for (int k = 0; k < (p + 1) / 2; ++k) {
        const double s = 0.5 * (nodes[p - k] - nodes[k]);
        nodes[k] = -s;
        nodes[p - k] = s;
    }
    if (p % 2 == 0)
        nodes[p / 2] = 0.0;
    return nodes;
}

} // namespace hembem
