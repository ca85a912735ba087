#include "hembem/experiments.hpp"

#include "hembem/error.hpp"
#include "hembem/io.hpp"
#include "hembem/trace.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

namespace hembem {

Discretization::Discretization(const RunConfig& cfg, BoundaryMesh m)
    : mesh(std::move(m)),
      dofs(mesh),
      material(cfg.material()),
      bem(assemble_bem(mesh, dofs, material, cfg.quadrature)),
      P(bem, dofs),
      F(assemble_load(mesh, dofs, cfg.traction()))
{
}

LevelOutcome solve_on(const Discretization& disc, const RunConfig& cfg, double eps, const Eigen::VectorXd* guess,
                      bool estimate)
{
    LevelOutcome out;
    const RegularizedLaw law(cfg.law(), eps);
    const ContactLawTerm term(disc.mesh, disc.dofs, law);
    const LinearConstraints con = contact_constraints(disc.mesh, disc.dofs, cfg.gap);
    SolverOptions opts = cfg.solver;
    opts.record_trace = opts.record_trace || cfg.solver_trace;
    out.solution = solve_regularized(disc.P.matrix(), disc.F.F, term, con, opts, guess);
    MultiplierOptions mopts;
    mopts.keep_zero_rows = cfg.keep_zero_rows;
    out.lambda = reconstruct_multiplier(out.solution, disc.mesh, disc.dofs, disc.P, disc.F, mopts);
    out.psi = disc.P.density(out.solution.u);
    if (estimate) {
        const EstimatorInput in{disc.mesh, disc.dofs, disc.bem, disc.P, disc.F,
                                disc.material, law, cfg.quadrature, cfg.gap,
                                cfg.norm_scaling};
        out.indicators = compute_indicators(in, out.solution.u, out.lambda);
        out.totals = total_estimate(out.indicators);
    }
    return out;
}

RunMode parse_run_mode(const std::string& s)
{
    if (s == "uniform")
        return RunMode::Uniform;
    if (s == "h")
        return RunMode::H;
    if (s == "hp")
        return RunMode::HP;
    if (s == "eps-study")
        return RunMode::EpsStudy;
    throw ConfigError("unknown mode '" + s + "' (uniform, h, hp, eps-study)");
}

std::string run_mode_name(RunMode m)
{
    switch (m) {
    case RunMode::Uniform:
        return "uniform";
    case RunMode::H:
        return "h";
    case RunMode::HP:
        return "hp";
    case RunMode::EpsStudy:
        return "eps-study";
    }
    return "?";
}

const std::vector<std::string>& results_header()
{
    static const std::vector<std::string> h = {"iter",     "n_elem",  "n_dof",    "est_total",
                                               "est_bubble", "est_pen", "est_cons", "est_comp",
                                               "err_u_P",  "err_lam_V", "wall_s"};
    return h;
}

double record_field(const ExperimentRecord& r, const std::string& field)
{
    if (field == "iter")
        return r.iteration;
    if (field == "n_elem")
        return r.n_elem;
    if (field == "n_dof")
        return r.n_dof;
    if (field == "est_total")
        return std::sqrt(r.est.total);
    if (field == "est_bubble")
        return std::sqrt(r.est.bubble);
    if (field == "est_pen")
        return std::sqrt(r.est.penetration);
    if (field == "est_cons")
        return std::sqrt(r.est.consistency);
    if (field == "est_comp")
        return std::sqrt(r.est.complementarity);
    if (field == "err_u_P")
        return r.err_u;
    if (field == "err_lam_V")
        return r.err_lam;
    if (field == "wall_s")
        return r.wall_s;
    if (field == "eps")
        return r.eps;
    throw ConfigError("unknown field '" + field + "'");
}

void write_results(std::ostream& out, const std::vector<ExperimentRecord>& records)
{
    CsvWriter w(out, results_header());
    for (const auto& r : records) {
        std::vector<double> row;
        for (const auto& f : results_header())
            row.push_back(record_field(r, f));
        w.row(row);
    }
}

void write_law_csv(std::ostream& out, const RegularizedLaw& law, double x_min, double x_max, int samples)
{
    CsvWriter w(out, {"x", "S", "S_x"});
    for (int i = 0; i < samples; ++i) {
        const double x = x_min + (x_max - x_min) * i / (samples - 1);
        w.row({x, law.value(x), law.deriv(x)});
    }
}

void write_indicators_csv(std::ostream& out, const BoundaryMesh& mesh, const std::vector<IndicatorRecord>& ind)
{
    out << "id,part,h,p,bubble,pen,cons,comp,total\n";
    for (const auto& r : ind) {
        const Element& el = mesh.elements[r.element];
        out << r.element << ',' << part_letter(el.part) << ',' << format_number(mesh.length(r.element)) << ','
            << el.p << ',' << format_number(r.bubble) << ',' << format_number(r.penetration) << ','
            << format_number(r.consistency) << ',' << format_number(r.complementarity) << ','
            << format_number(r.total()) << '\n';
    }
}

std::vector<double> compute_eoc(const std::vector<double>& N, const std::vector<double>& e)
{
    if (N.size() != e.size())
        throw DomainError("compute_eoc: size mismatch");
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
        const bool ok = e[k] > 0.0 && e[k + 1] > 0.0 && std::isfinite(e[k]) && std::isfinite(e[k + 1]) &&
                        N[k] > 0.0 && N[k + 1] > 0.0 && N[k] != N[k + 1];
        out.push_back(ok ? -std::log(e[k + 1] / e[k]) / std::log(N[k + 1] / N[k])
                         : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
}

std::vector<double> compute_eoc(const std::vector<ExperimentRecord>& records, const std::string& field)
{
    std::vector<double> N, e;
    for (const auto& r : records) {
        N.push_back(r.n_dof);
        e.push_back(record_field(r, field));
    }
    return compute_eoc(N, e);
}

double fitted_rate(const std::vector<double>& N, const std::vector<double>& e, int count)
{
    std::vector<double> x, y;
    for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k] > 0.0 && std::isfinite(e[k]) && N[k] > 0.0) {
            x.push_back(std::log(N[k]));
            y.push_back(-std::log(e[k]));
        }
    if (static_cast<int>(x.size()) > count) {
        x.erase(x.begin(), x.end() - count);
        y.erase(y.begin(), y.end() - count);
    }
    if (x.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

namespace {

using Clock = std::chrono::steady_clock;

struct Snapshot {
    BoundaryMesh mesh;
    DofMap dofs;
    Eigen::VectorXd u;
    MultiplierSolution lambda;
};

std::string iter_name(const std::string& dir, const std::string& stem, int it, const std::string& ext)
{
    return dir + "/" + stem + "_" + std::to_string(it) + ext;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    body(out);
    if (!out)
        throw Error("write failed for " + path);
}

void write_solver_trace(const std::string& path, const DiscreteSolution& sol)
{
    write_file(path, [&](std::ostream& o) {
        CsvWriter w(o, {"iteration", "residual", "active_set_size"});
        for (const auto& t : sol.trace)
            w.row({static_cast<double>(t.iteration), t.residual, static_cast<double>(t.active)});
    });
}

void write_level_artifacts(const std::string& dir, const RunConfig& cfg, int it, const Discretization& disc,
                           const LevelOutcome& out)
{
    if (dir.empty())
        return;
    write_file(iter_name(dir, "mesh", it, ".jsonl"), [&](std::ostream& o) { write_mesh_jsonl(o, disc.mesh); });
    if (cfg.dump_indicators && !out.indicators.empty())
        write_file(iter_name(dir, "indicators", it, ".csv"),
                   [&](std::ostream& o) { write_indicators_csv(o, disc.mesh, out.indicators); });
    if (cfg.solver_trace)
        write_solver_trace(iter_name(dir, "solver_trace", it, ".csv"), out.solution);
}

void fill_trace(SequenceResult& res, const RunConfig& cfg, const Discretization& disc, const LevelOutcome& out,
                double eps)
{
    const RegularizedLaw law(cfg.law(), eps);
    for (const ContactSample& s : sample_contact(disc.mesh, disc.dofs, out.solution.u, cfg.trace_points)) {
        res.trace_s.push_back(s.s);
        res.trace_un.push_back(s.un);
        res.trace_sx.push_back(law.deriv(s.un));
        res.trace_lambda.push_back(out.lambda.value(s.element, s.xi, disc.mesh));
    }
}

void write_trace(const std::string& dir, const RunConfig& cfg, const SequenceResult& res)
{
    write_file(dir + "/trace.csv", [&](std::ostream& o) {
        CsvWriter w(o, {"s", "u_n", "gap", "S_x", "lambda"});
        for (std::size_t i = 0; i < res.trace_s.size(); ++i)
            w.row({res.trace_s[i], res.trace_un[i], cfg.gap, res.trace_sx[i], res.trace_lambda[i]});
    });
}

ExperimentRecord make_record(int it, const Discretization& disc, const LevelOutcome& out, double eps, double wall)
{
    ExperimentRecord r;
    r.iteration = it;
    r.n_elem = disc.mesh.size();
    r.n_dof = disc.dofs.n_reduced();
    r.est = out.totals;
    r.wall_s = wall;
    r.eps = eps;
    return r;
}

void log_record(std::ostream* log, const std::string& mode, const ExperimentRecord& r, const LevelOutcome& out)
{
    if (!log)
        return;
    *log << mode << " iter " << r.iteration << ": elements " << r.n_elem << ", dof " << r.n_dof << ", eps "
         << r.eps << ", estimate " << std::sqrt(r.est.total) << ", newton " << out.solution.iterations
         << ", residual " << out.solution.residual << ", " << r.wall_s << " s" << std::endl;
}

// Errors of the earlier snapshots against the last one, omitting the last `cutoff` records.
void errors_against_fine(std::vector<ExperimentRecord>& records, const std::vector<Snapshot>& snaps,
                         const Discretization& fine, const Snapshot& ref, const RunConfig& cfg)
{
    const int n = static_cast<int>(records.size());
    for (int k = 0; k < n - cfg.error_cutoff; ++k) {
        const Eigen::VectorXd uk = prolongate_reduced(snaps[k].mesh, snaps[k].dofs, snaps[k].u, fine.mesh, fine.dofs);
        records[k].err_u = energy_norm(fine.P.matrix(), ref.u - uk);
        records[k].err_lam = norm_V_on_contact(ref.lambda, snaps[k].lambda, fine.mesh, fine.material, cfg.quadrature);
    }
}

SequenceResult run_refinement(const RunConfig& cfg, RunMode mode, const std::string& dir, std::ostream* log)
{
    SequenceResult res;
    std::vector<Snapshot> snaps;
    AdaptiveConfig acfg = cfg.adaptive;
    BoundaryMesh mesh;
    int max_iter;
    if (mode == RunMode::Uniform) {
        acfg.mode = AdaptiveMode::Uniform;
        mesh = build_benchmark_mesh(cfg.n0, cfg.side);
        max_iter = cfg.uniform_levels;
    } else {
        acfg.mode = mode == RunMode::H ? AdaptiveMode::H : AdaptiveMode::HP;
        mesh = build_benchmark_mesh(cfg.hp_n0, cfg.side);
        max_iter = cfg.adaptive.max_iterations;
    }
    std::unique_ptr<Discretization> disc;
    LevelOutcome out;
    Eigen::VectorXd guess;
    for (int it = 0;; ++it) {
        const auto t0 = Clock::now();
        disc = std::make_unique<Discretization>(cfg, mesh);
        if (!snaps.empty())
            guess = prolongate_reduced(snaps.back().mesh, snaps.back().dofs, snaps.back().u, disc->mesh, disc->dofs);
        try {
            out = solve_on(*disc, cfg, cfg.eps, snaps.empty() ? nullptr : &guess, true);
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError(run_mode_name(mode) + " iteration " + std::to_string(it) + ": " + e.what(),
                                      e.residual());
        }
        ExperimentRecord rec = make_record(it, *disc, out, cfg.eps,
                                           std::chrono::duration<double>(Clock::now() - t0).count());
        write_level_artifacts(dir, cfg, it, *disc, out);
        snaps.push_back({disc->mesh, disc->dofs, out.solution.u, out.lambda});

        bool last = it + 1 >= max_iter;
        if (!last) {
            const auto plan = plan_refinement(disc->mesh, disc->dofs, out.solution.u, out.psi, out.indicators, acfg);
            if (plan.empty()) {
                last = true;
            } else {
                for (const auto& [e, r] : plan) {
                    if (r == Refinement::H) {
                        ++rec.h_refined;
                        if (disc->mesh.elements[e].part == Part::Contact)
                            ++rec.h_refined_contact;
                    } else {
                        ++rec.p_refined;
                    }
                }
                BoundaryMesh next = refine(disc->mesh, plan);
                if (mode != RunMode::Uniform && DofMap(next).n_reduced() > cfg.adaptive.max_dof)
                    last = true;
                else
                    mesh = std::move(next);
            }
        }
        if (last) {
            rec.h_refined = rec.h_refined_contact = rec.p_refined = 0;
            res.records.push_back(rec);
            log_record(log, run_mode_name(mode), rec, out);
            break;
        }
        res.records.push_back(rec);
        log_record(log, run_mode_name(mode), rec, out);
    }
    errors_against_fine(res.records, snaps, *disc, snaps.back(), cfg);
    res.final_mesh = disc->mesh;
    fill_trace(res, cfg, *disc, out, cfg.eps);
    return res;
}

SequenceResult run_eps_study(const RunConfig& cfg, const std::string& dir, std::ostream* log)
{
    SequenceResult res;
    const auto t0 = Clock::now();
    const Discretization disc(cfg, build_benchmark_mesh(cfg.eps_n0, cfg.side));
    const LevelOutcome fine = solve_on(disc, cfg, cfg.eps_fine, nullptr, false);
    if (log)
        *log << "eps-study reference: eps " << cfg.eps_fine << ", newton " << fine.solution.iterations << ", "
             << std::chrono::duration<double>(Clock::now() - t0).count() << " s" << std::endl;
    std::vector<double> eps = cfg.eps_values;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    Eigen::VectorXd guess;
    int it = 0;
    LevelOutcome out;
    for (double e : eps) {
        const auto t1 = Clock::now();
        out = solve_on(disc, cfg, e, it ? &guess : nullptr, true);
        guess = out.solution.u;
        ExperimentRecord rec =
            make_record(it, disc, out, e, std::chrono::duration<double>(Clock::now() - t1).count());
        rec.err_u = energy_norm(disc.P.matrix(), fine.solution.u - out.solution.u);
        rec.err_lam = norm_V_on_contact(fine.lambda, out.lambda, disc.mesh, disc.material, cfg.quadrature);
        write_level_artifacts(dir, cfg, it, disc, out);
        res.records.push_back(rec);
        log_record(log, "eps-study", rec, out);
        ++it;
    }
    res.final_mesh = disc.mesh;
    fill_trace(res, cfg, disc, fine, cfg.eps_fine);
    return res;
}

} // namespace

SequenceResult run_sequence(const RunConfig& cfg, RunMode mode, const std::string& out_dir, std::ostream* log)
{
    cfg.validate();
    if (!out_dir.empty())
        ensure_directory(out_dir);
    SequenceResult res =
        mode == RunMode::EpsStudy ? run_eps_study(cfg, out_dir, log) : run_refinement(cfg, mode, out_dir, log);
    if (!out_dir.empty()) {
        write_file(out_dir + "/results.csv", [&](std::ostream& o) { write_results(o, res.records); });
        write_file(out_dir + "/refinements.csv", [&](std::ostream& o) {
            CsvWriter w(o, {"iter", "h_refined", "h_contact", "p_refined"});
            for (const auto& r : res.records)
                w.row({double(r.iteration), double(r.h_refined), double(r.h_refined_contact),
                       double(r.p_refined)});
        });
        if (mode == RunMode::EpsStudy)
            write_file(out_dir + "/eps_study.csv", [&](std::ostream& o) {
                CsvWriter w(o, {"iter", "eps", "err_u_P", "err_lam_V", "est_total"});
                for (const auto& r : res.records)
                    w.row({double(r.iteration), r.eps, r.err_u, r.err_lam, std::sqrt(r.est.total)});
            });
        write_trace(out_dir, cfg, res);
        write_file(out_dir + "/law.csv", [&](std::ostream& o) {
            write_law_csv(o, RegularizedLaw(cfg.law(), mode == RunMode::EpsStudy ? cfg.eps_fine : cfg.eps), -0.06,
                          0.0, 601);
        });
        write_file(out_dir + "/config.txt", [&](std::ostream& o) { write_config(o, cfg); });
    }
    return res;
}

} // namespace hembem
