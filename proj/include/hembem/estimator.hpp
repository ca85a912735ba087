#pragma once

#include "hembem/multiplier.hpp"
#include "hembem/trace.hpp"

#include <Eigen/Core>

#include <vector>

namespace hembem {

/// Squared indicator contributions of one element.
struct IndicatorRecord {
    int element = 0;
    double bubble = 0.0;
    double penetration = 0.0;
    double consistency = 0.0;
    double complementarity = 0.0;
    double total() const { return bubble + penetration + consistency + complementarity; }
};

struct EstimateTotals {
    double total = 0.0;
    double bubble = 0.0;
    double penetration = 0.0;
    double consistency = 0.0;
    double complementarity = 0.0;
};

/// L2 surrogates of the trace norms in the contact terms.
/// Dual: p/h on the penetration (H^{1/2}) and h/p on the consistency (H^{-1/2}) term.
/// Printed: h/p on the penetration and p/h on the consistency term.
enum class NormScaling { Dual, Printed };

/// Everything the indicators need from one solve.
struct EstimatorInput {
    const BoundaryMesh& mesh;
    const DofMap& dofs;
    const BemMatrices& bem;
    const SteklovOperator& P;
    const LoadFunctional& F;
    const Material& material;
    const RegularizedLaw& law;
    const QuadratureOptions& quadrature;
    double gap = 0.0;
    NormScaling scaling = NormScaling::Dual;
};

/// Per element r(b)^2 / <P b, b> summed over the next-degree interior modes b of both components;
/// on Gamma_D the residual of V psi = (K + I/2) u tested with the next Legendre mode.
std::vector<double> bubble_estimate(const EstimatorInput& in, const Eigen::VectorXd& u,
                                    const MultiplierSolution& lambda);

/// Penetration, consistency and complementarity contributions per element (zero off Gamma_C).
std::vector<IndicatorRecord> contact_indicators(const EstimatorInput& in, const Eigen::VectorXd& u,
                                                const MultiplierSolution& lambda, int extra_points = 17);

/// Complete indicator set.
std::vector<IndicatorRecord> compute_indicators(const EstimatorInput& in, const Eigen::VectorXd& u,
                                                const MultiplierSolution& lambda);

EstimateTotals total_estimate(const std::vector<IndicatorRecord>& indicators);

/// Pointwise contact contributions on an element of length h and degree p:
/// w_pen (un - g)_+^2, w_cons (l - s)_-^2 and (l - s)_+ (un - g)_- (quadrature weights applied by the caller).
struct ContactDensity {
    double penetration, consistency, complementarity;
};
ContactDensity contact_density(double un_minus_g, double lambda_minus_sx, double h, double p,
                               NormScaling scaling = NormScaling::Dual);

} // namespace hembem
