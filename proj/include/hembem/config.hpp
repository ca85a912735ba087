#pragma once

#include "hembem/adaptivity.hpp"
#include "hembem/assembly.hpp"
#include "hembem/regularization.hpp"
#include "hembem/steklov.hpp"
#include "hembem/vi_solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace hembem {

/// Experiment configuration. Defaults reproduce the benchmark at desk scale.
struct RunConfig {
    // geometry and data
    int n0 = 16;
    double side = 0.5;
    double E = 5.0;
    double nu = 0.45;
    Vec2 traction_a{0.25, 0.5};
    Vec2 traction_b{0.5, 0.5};
    Vec2 traction_value{0.0, 0.25};
    double law_A1 = 0.05, law_A2 = 0.03, law_t1 = 0.02, law_t2 = 0.04;
    double eps = 1e-4;
    double gap = 0.0;

    // sequences
    int uniform_levels = 5;
    AdaptiveConfig adaptive;
    int hp_n0 = 4;
    int eps_n0 = 128;
    std::vector<double> eps_values{1e-1, 3.16227766e-2, 1e-2, 3.16227766e-3, 1e-3,
                                   3.16227766e-4, 1e-4, 3.16227766e-5, 1e-5};
    double eps_fine = 2.5e-6;
    int error_cutoff = 2;

    // numerics
    QuadratureOptions quadrature;
    SolverOptions solver;
    bool keep_zero_rows = true;
    NormScaling norm_scaling = NormScaling::Dual;

    // output
    int trace_points = 16;
    bool solver_trace = false;
    bool dump_indicators = true;
    std::uint64_t seed = 1;

    Material material() const { return Material(E, nu); }
    LawSpec law() const { return delamination_law(law_A1, law_A2, law_t1, law_t2); }
    std::vector<TractionSegment> traction() const { return {{traction_a, traction_b, traction_value}}; }

    void validate() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys are errors.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
/// The effective configuration in the same syntax.
void write_config(std::ostream& out, const RunConfig& cfg);

} // namespace hembem
