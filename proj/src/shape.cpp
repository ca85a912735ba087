#include "hembem/shape.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace hembem {

namespace {

struct LobattoTable {
    std::vector<double> nodes;
    std::vector<double> bary; // barycentric weights
};

const LobattoTable& lobatto_table(int p)
{
    static std::map<int, LobattoTable> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(p);
    if (it != cache.end())
        return it->second;
    LobattoTable t;
    t.nodes = gauss_lobatto_nodes(p);
    t.bary.assign(p + 1, 1.0);
    for (int j = 0; j <= p; ++j)
        for (int k = 0; k <= p; ++k)
            if (k != j)
                t.bary[j] /= t.nodes[j] - t.nodes[k];
    return cache.emplace(p, std::move(t)).first->second;
}

// Lagrange basis values and derivatives by the product formula; robust at the nodes.
void lagrange(const std::vector<double>& nodes, const std::vector<double>& bary, double x,
              double* values, double* derivatives)
{
    const int n = static_cast<int>(nodes.size());
    for (int j = 0; j < n; ++j) {
        double v = bary[j], d = 0.0;
        // l_j(x) = bary_j * prod_{k != j}(x - x_k); derivative by the product rule
        for (int k = 0; k < n; ++k) {
            if (k == j)
                continue;
            d = d * (x - nodes[k]) + v;
            v *= x - nodes[k];
        }
        if (values)
            values[j] = v;
        if (derivatives)
            derivatives[j] = d;
    }
}

} // namespace

LocalBasis::LocalBasis(ShapeFamily family, int degree) : family_(family), degree_(degree)
{
    if (family == ShapeFamily::Lobatto) {
        if (degree < 1)
            throw DomainError("LocalBasis: Lobatto degree must be >= 1");
        const LobattoTable& t = lobatto_table(degree);
        nodes_ = &t.nodes;
        bary_ = &t.bary;
    } else if (family == ShapeFamily::Bubble) {
        if (degree < 1)
            throw DomainError("LocalBasis: bubble degree must be >= 1");
    } else if (degree < 0) {
        throw DomainError("LocalBasis: negative degree");
    }
}

int LocalBasis::count() const
{
    switch (family_) {
    case ShapeFamily::Lobatto:
    case ShapeFamily::Legendre:
        return degree_ + 1;
    case ShapeFamily::Bubble:
    case ShapeFamily::Mode:
        return 1;
    }
    return 0;
}

int LocalBasis::polynomial_degree() const
{
    return family_ == ShapeFamily::Bubble ? degree_ + 1 : degree_;
}

void LocalBasis::evaluate(double xi, double* values, double* derivatives) const
{
    switch (family_) {
    case ShapeFamily::Lobatto:
        lagrange(*nodes_, *bary_, xi, values, derivatives);
        return;
    case ShapeFamily::Legendre: {
        double p0 = 1.0, p1 = xi, d0 = 0.0, d1 = 1.0;
        for (int k = 0; k <= degree_; ++k) {
            double v, d;
            if (k == 0) {
                v = 1.0;
                d = 0.0;
            } else if (k == 1) {
                v = xi;
                d = 1.0;
            } else {
                v = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
                d = d0 + (2.0 * k - 1.0) * p1;
                p0 = p1;
                p1 = v;
                d0 = d1;
                d1 = d;
            }
            if (values)
                values[k] = v;
            if (derivatives)
                derivatives[k] = d;
        }
        return;
    }
    case ShapeFamily::Bubble: {
        double vp, dp, vm, dm;
        legendre_with_derivative(degree_ + 1, xi, vp, dp);
        legendre_with_derivative(degree_ - 1, xi, vm, dm);
        if (values)
            values[0] = vp - vm;
        if (derivatives)
            derivatives[0] = dp - dm;
        return;
    }
    case ShapeFamily::Mode: {
        double v, d;
        legendre_with_derivative(degree_, xi, v, d);
        if (values)
            values[0] = v;
        if (derivatives)
            derivatives[0] = d;
        return;
    }
    }
}

} // namespace hembem
