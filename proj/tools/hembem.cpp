#include "hembem/error.hpp"
#include "hembem/experiments.hpp"
#include "hembem/io.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>

using namespace hembem;

int main(int argc, char** argv)
{
    CLI::App app{"Boundary element solver for adhesive contact with hp-adaptivity"};
    app.require_subcommand(1);

    std::string config_path, mode = "uniform", out_dir = "out";
    auto* run = app.add_subcommand("run", "run a refinement sequence or the eps study");
    run->add_option("--config", config_path, "key = value configuration file (defaults if omitted)");
    run->add_option("--mode", mode, "uniform | h | hp | eps-study")
        ->check(CLI::IsMember({"uniform", "h", "hp", "eps-study"}));
    run->add_option("--out", out_dir, "output directory");

    std::string in_path, field = "est_total";
    auto* eoc = app.add_subcommand("eoc", "experimental orders of convergence from results.csv");
    eoc->add_option("--in", in_path, "results.csv")->required();
    eoc->add_option("--field", field, "column to analyze");

    auto* dump = app.add_subcommand("config", "print the default configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
            const SequenceResult res = run_sequence(cfg, parse_run_mode(mode), out_dir, &std::cerr);
            const auto rates = compute_eoc(res.records, "est_total");
            std::cout << "records: " << res.records.size() << "\n";
            for (std::size_t k = 0; k < rates.size(); ++k)
                std::cout << "eoc(est_total) " << k << "->" << k + 1 << ": " << format_number(rates[k]) << "\n";
            return 0;
        }
        if (*eoc) {
            const CsvTable t = read_csv_file(in_path);
            const auto& e = t.column(field);
            const auto rates = compute_eoc(t.column("n_dof"), e);
            for (std::size_t k = 0; k < rates.size(); ++k) {
                if (std::isnan(rates[k]))
                    std::cerr << "notice: step " << k << " skipped (non-positive or missing values)\n";
                std::cout << k << "," << format_number(rates[k]) << "\n";
            }
            return 0;
        }
        if (*dump) {
            write_config(std::cout, RunConfig{});
            return 0;
        }
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (last residual " << e.residual() << ")\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
