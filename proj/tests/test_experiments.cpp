#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hembem/error.hpp"
#include "hembem/experiments.hpp"
#include "hembem/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hembem;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("hembem_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("config parsing")
{
    std::istringstream in("# comment\nn0 = 8\n  eps = 1e-3  # trailing\nadaptive_mode = h\nnorm_scaling = printed\n"
                          "continuation = false\ntraction_a = 0.25, 0.5\n");
    const RunConfig c = parse_config(in);
    CHECK(c.n0 == 8);
    CHECK(c.eps == 1e-3);
    CHECK(c.adaptive.mode == AdaptiveMode::H);
    CHECK(c.norm_scaling == NormScaling::Printed);
    CHECK_FALSE(c.solver.continuation);

    std::istringstream unknown("bogus = 1\n");
    CHECK_THROWS_AS(parse_config(unknown), ConfigError);
    std::istringstream badnum("eps = abc\n");
    CHECK_THROWS_AS(parse_config(badnum), ConfigError);
    std::istringstream noeq("eps 1\n");
    CHECK_THROWS_AS(parse_config(noeq), ConfigError);
    std::istringstream neg("n0 = 0\n");
    CHECK_THROWS_AS(parse_config(neg), ConfigError);
    std::istringstream order("eps_fine = 1\n");
    CHECK_THROWS_AS(parse_config(order), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/hembem.cfg"), ConfigError);
}

TEST_CASE("config round trip")
{
    RunConfig c;
    c.n0 = 5;
    c.eps = 3e-4;
    c.eps_values = {0.1, 0.01};
    c.law_A1 = 0.06;
    c.adaptive.theta = 0.4;
    std::stringstream ss;
    write_config(ss, c);
    const RunConfig r = parse_config(ss);
    CHECK(r.n0 == 5);
    CHECK(r.eps == c.eps);
    CHECK(r.eps_values == c.eps_values);
    CHECK(r.law_A1 == 0.06);
    CHECK(r.adaptive.theta == 0.4);
    CHECK(r.eps_fine == c.eps_fine);
}

TEST_CASE("csv writer and reader")
{
    std::stringstream ss;
    CsvWriter w(ss, {"a", "b"});
    w.row({1.0, std::nan("")});
    w.row({0.1, -2.5e-300});
    const CsvTable t = read_csv(ss);
    CHECK(t.rows() == 2);
    CHECK(t.column("a")[1] == 0.1);
    CHECK(std::isnan(t.column("b")[0]));
    CHECK(t.column("b")[1] == -2.5e-300);
    CHECK_THROWS_AS(t.column("c"), ConfigError);
    CHECK_THROWS_AS(w.row({1.0}), Error);
}

TEST_CASE("eoc")
{
    std::vector<double> N{10, 20, 40, 80}, e(4), c(4, 0.3);
    for (int i = 0; i < 4; ++i)
        e[i] = 1.0 / std::sqrt(N[i]);
    for (double x : compute_eoc(N, e))
        CHECK(x == doctest::Approx(0.5).epsilon(1e-14));
    for (double x : compute_eoc(N, c))
        CHECK(x == 0.0);
    CHECK(fitted_rate(N, e, 3) == doctest::Approx(0.5).epsilon(1e-14));
    std::vector<double> z{1.0, 0.0, 0.5, 0.25};
    const auto ez = compute_eoc(N, z);
    CHECK(std::isnan(ez[0]));
    CHECK(std::isnan(ez[1]));
    CHECK(ez[2] == doctest::Approx(1.0));

    std::vector<ExperimentRecord> recs(3);
    for (int i = 0; i < 3; ++i) {
        recs[i].n_dof = 100 << i;
        recs[i].est.total = 1.0 / recs[i].n_dof; // squared sum
    }
    CHECK(record_field(recs[0], "est_total") == doctest::Approx(0.1));
    for (double x : compute_eoc(recs, "est_total"))
        CHECK(x == doctest::Approx(0.5));
    CHECK_THROWS_AS(record_field(recs[0], "nope"), ConfigError);
    CHECK(parse_run_mode("eps-study") == RunMode::EpsStudy);
    CHECK(run_mode_name(RunMode::HP) == "hp");
    CHECK_THROWS_AS(parse_run_mode("x"), ConfigError);
}

TEST_CASE("uniform sequence writes its artifacts")
{
    RunConfig cfg;
    cfg.n0 = 4;
    cfg.uniform_levels = 3;
    const fs::path dir = scratch("uniform");
    const SequenceResult r = run_sequence(cfg, RunMode::Uniform, dir.string());
    REQUIRE(r.records.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(r.records[k].n_elem == 16 << k);
        CHECK(fs::exists(dir / ("mesh_" + std::to_string(k) + ".jsonl")));
        CHECK(fs::exists(dir / ("indicators_" + std::to_string(k) + ".csv")));
        CHECK(r.records[k].est.penetration == 0.0);
    }
    // dof roughly doubles per bisection
    CHECK(r.records[1].n_dof == 2 * r.records[0].n_dof + 2);
    CHECK(r.records[2].n_dof == 2 * r.records[1].n_dof + 2);
    CHECK(std::isnan(r.records[2].err_u));

    const CsvTable res = read_csv_file((dir / "results.csv").string());
    CHECK(res.rows() == 3);
    CHECK(res.header == results_header());
    CHECK(res.column("est_total")[0] == doctest::Approx(std::sqrt(r.records[0].est.total)));
    const CsvTable trace = read_csv_file((dir / "trace.csv").string());
    CHECK(trace.rows() == static_cast<std::size_t>(16 * (r.records[2].n_elem / 4)));
    const CsvTable law = read_csv_file((dir / "law.csv").string());
    CHECK(law.column("x").front() == doctest::Approx(-0.06));
    CHECK(law.column("x").back() == 0.0);
    CHECK(fs::exists(dir / "config.txt"));
}

TEST_CASE("hp sequence dumps every mesh and refines")
{
    RunConfig cfg;
    cfg.hp_n0 = 2;
    cfg.adaptive.max_iterations = 4;
    const fs::path dir = scratch("hp");
    const SequenceResult r = run_sequence(cfg, RunMode::HP, dir.string());
    REQUIRE(r.records.size() == 4);
    for (std::size_t k = 0; k < r.records.size(); ++k) {
        CHECK(fs::exists(dir / ("mesh_" + std::to_string(k) + ".jsonl")));
        if (k > 0)
            CHECK(r.records[k].n_dof > r.records[k - 1].n_dof);
    }
    const CsvTable ref = read_csv_file((dir / "refinements.csv").string());
    CHECK(ref.rows() == 4);
}
