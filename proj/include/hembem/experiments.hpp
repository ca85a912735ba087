#pragma once

#include "hembem/config.hpp"
#include "hembem/estimator.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace hembem {

/// Mesh with its spaces, boundary element matrices, Steklov operator and load.
class Discretization {
public:
    Discretization(const RunConfig& cfg, BoundaryMesh mesh);
    Discretization(const Discretization&) = delete;
    Discretization& operator=(const Discretization&) = delete;

    const BoundaryMesh mesh;
    const DofMap dofs;
    const Material material;
    const BemMatrices bem;
    const SteklovOperator P;
    const LoadFunctional F;
};

/// Result of one regularized solve with its multiplier and indicators.
struct LevelOutcome {
    DiscreteSolution solution;
    MultiplierSolution lambda;
    Eigen::VectorXd psi;
    std::vector<IndicatorRecord> indicators; ///< empty when the estimator was skipped
    EstimateTotals totals;
};

LevelOutcome solve_on(const Discretization& disc, const RunConfig& cfg, double eps,
                      const Eigen::VectorXd* guess = nullptr, bool estimate = true);

struct ExperimentRecord {
    int iteration = 0;
    int n_elem = 0;
    int n_dof = 0;
    EstimateTotals est; ///< squared sums
    double err_u = std::numeric_limits<double>::quiet_NaN();
    double err_lam = std::numeric_limits<double>::quiet_NaN();
    double wall_s = 0.0;
    double eps = 0.0;
    int h_refined = 0;         ///< bisections decided after this iteration
    int h_refined_contact = 0; ///< of which on Gamma_C
    int p_refined = 0;
};

enum class RunMode { Uniform, H, HP, EpsStudy };
RunMode parse_run_mode(const std::string& s);
std::string run_mode_name(RunMode m);

struct SequenceResult {
    std::vector<ExperimentRecord> records;
    BoundaryMesh final_mesh;
    std::vector<double> trace_s, trace_un, trace_sx, trace_lambda;
};

/// Runs a sequence and writes its artifacts to out_dir (skipped when empty). Progress goes to log.
SequenceResult run_sequence(const RunConfig& cfg, RunMode mode, const std::string& out_dir,
                            std::ostream* log = nullptr);

/// eoc_k = -log(e_{k+1}/e_k) / log(N_{k+1}/N_k); NaN where a value is not positive or finite.
std::vector<double> compute_eoc(const std::vector<double>& N, const std::vector<double>& e);
std::vector<double> compute_eoc(const std::vector<ExperimentRecord>& records, const std::string& field);

/// Least-squares slope of -log e against log N over the last `count` positive entries.
double fitted_rate(const std::vector<double>& N, const std::vector<double>& e, int count);

/// Value of a named results.csv column of a record.
double record_field(const ExperimentRecord& r, const std::string& field);

/// results.csv header.
const std::vector<std::string>& results_header();
void write_results(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_law_csv(std::ostream& out, const RegularizedLaw& law, double x_min, double x_max, int samples);
void write_indicators_csv(std::ostream& out, const BoundaryMesh& mesh, const std::vector<IndicatorRecord>& ind);

} // namespace hembem
