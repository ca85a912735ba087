#pragma once

#include "hembem/estimator.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace hembem {

enum class AdaptiveMode { Uniform, H, HP };

struct AdaptiveConfig {
    double theta = 0.3;
    double delta = 0.5;
    int max_iterations = 120;
    int max_dof = 2000;
    AdaptiveMode mode = AdaptiveMode::HP;
    void validate() const;
};

/// Minimal set of elements whose indicator sum reaches theta times the total; descending order,
/// ties by lower id. Empty if all indicators vanish.
std::vector<int> doerfler_mark(const std::vector<double>& indicators, double theta);

/// a_i = (2i+1)/2 int_{-1}^{1} v L_i, i = 0..p, with p + 9 Gauss points.
std::vector<double> legendre_coefficients(const std::function<double(double)>& v, int p);

/// Least-squares slope of log|a_i| against i over |a_i| > 1e-14 (decay gives m < 0).
/// Empty when fewer than two coefficients are usable.
std::optional<double> decay_slope(const std::vector<double>& a);

/// P when e^{m} <= delta in every direction, or when a direction lacks data; H otherwise.
Refinement decide_refinement(const std::vector<std::optional<double>>& slopes, double delta);

/// Slopes of the element's analyzed directions: displacement components off Gamma_D,
/// density components on Gamma_D.
std::vector<std::optional<double>> element_slopes(const BoundaryMesh& mesh, const DofMap& dofs,
                                                  const Eigen::VectorXd& u_reduced, const Eigen::VectorXd& psi,
                                                  int e);

/// Marks by Doerfler and decides h or p per marked element (mode H always bisects).
std::vector<std::pair<int, Refinement>> plan_refinement(const BoundaryMesh& mesh, const DofMap& dofs,
                                                        const Eigen::VectorXd& u_reduced,
                                                        const Eigen::VectorXd& psi,
                                                        const std::vector<IndicatorRecord>& indicators,
                                                        const AdaptiveConfig& cfg);

} // namespace hembem
