#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vqopt/experiment.hpp"
#include "vqopt/verify.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override) {
    const vqopt::ExperimentConfig config =
        vqopt::load_experiment_config(config_path);
    const std::filesystem::path out_dir =
        out_override.empty() ? std::filesystem::path(config.output_dir)
                             : std::filesystem::path(out_override);
    return vqopt::run_experiment_to_files(config, out_dir);
}

int cmd_compare(const std::string& config_path) {
    const vqopt::ExperimentConfig config =
        vqopt::load_experiment_config(config_path);
    const vqopt::ExperimentResult result = vqopt::run_experiment(config);

    std::printf("%-20s %16s %14s %6s %10s %5s\n", "method", "objective",
                "max|grad|", "iters", "evals", "conv");
    for (const vqopt::MethodOutcome& o : result.outcomes) {
        if (o.failed) {
            std::printf("%-20s failed: %s\n", o.method.c_str(), o.error.c_str());
            continue;
        }
        const vqopt::TraceRecord& last = o.trace.records.back();
        std::printf("%-20s %16.10f %14.3e %6d %10lld %5s\n", o.method.c_str(),
                    last.objective, last.max_abs_gradient, last.iteration,
                    o.trace.total_evals(), o.trace.converged ? "yes" : "no");
    }
    return 0;
}

int cmd_count(const std::string& config_path) {
    const vqopt::ExperimentConfig config =
        vqopt::load_experiment_config(config_path);
    std::printf("%-20s %18s  %s\n", "method", "evals/iteration", "notes");
    for (const vqopt::BudgetLine& line : vqopt::count_budgets(config)) {
        if (line.exact >= 0) {
            std::printf("%-20s %18lld  %s\n", line.method.c_str(), line.exact,
                        line.detail.c_str());
        } else {
            const std::string band =
                std::to_string(line.band_low) + "-" + std::to_string(line.band_high);
            std::printf("%-20s %18s  %s\n", line.method.c_str(), band.c_str(),
                        line.detail.c_str());
        }
    }
    return 0;
}

int cmd_verify(int max_m, int max_g, std::uint64_t seed) {
    const vqopt::VerificationReport report =
        vqopt::verify_tomography(max_m, max_g, seed);
    for (const vqopt::VerificationCase& vc : report.cases) {
        std::string orders;
        for (std::size_t i = 0; i < vc.orders.size(); ++i) {
            if (i) orders += ",";
            orders += std::to_string(vc.orders[i]);
        }
        std::printf("cluster M=%zu orders=(%s) quadrature=%zu  rel.dev=%.3e\n",
                    vc.orders.size(), orders.c_str(), vc.quadrature_points,
                    vc.max_relative_deviation);
    }
    std::printf("max relative deviation: %.3e  (%.1f s)\n",
                report.max_relative_deviation, report.elapsed_seconds);
    return report.max_relative_deviation <= 1e-12 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational quantum circuit optimization via cluster tomography, "
                 "Jacobi sweeps, and DIIS acceleration"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Run an experiment and write trace files");
    run->add_option("config", config_path, "TOML experiment config")->required();
    run->add_option("--out", out_dir, "Output directory (overrides config)");

    std::string compare_config;
    auto* compare =
        app.add_subcommand("compare", "Run an experiment and print a summary table");
    compare->add_option("config", compare_config, "TOML experiment config")
        ->required();

    std::string count_config;
    auto* count = app.add_subcommand(
        "count", "Print per-iteration evaluation budgets (no simulation)");
    count->add_option("config", count_config, "TOML experiment config")->required();

    int max_m = 5;
    int max_g = 5;
    std::uint64_t seed = 7;
    auto* verify = app.add_subcommand(
        "verify-tomography",
        "Cross-check fitted tomography models against direct simulation");
    verify->add_option("--max-m", max_m, "Largest cluster size");
    verify->add_option("--max-g", max_g, "Largest pinning order");
    verify->add_option("--seed", seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (compare->parsed()) return cmd_compare(compare_config);
        if (count->parsed()) return cmd_count(count_config);
        if (verify->parsed()) return cmd_verify(max_m, max_g, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
