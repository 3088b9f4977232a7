#include "vqopt/experiment.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "vqopt/errors.hpp"
#include "vqopt/lbfgs.hpp"
#include "vqopt/powell.hpp"
#include "vqopt/verify.hpp"

namespace vqopt {

namespace {

int log_level() {
    // VQOPT_LOG: quiet | info | debug (default info)
    static const int level = [] {
        const char* env = std::getenv("VQOPT_LOG");
        if (!env) return 1;
        const std::string v(env);
        if (v == "quiet") return 0;
        if (v == "debug") return 2;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[vqopt] " << msg << "\n";
}

} // namespace

MethodOutcome run_method(const ExperimentConfig& config, const MethodSpec& method) {
    MethodOutcome outcome;
    outcome.method = method.name;
    try {
        Objective objective = build_objective(config.problem);
        const std::vector<double> x0 = initial_parameters(config.problem);

        switch (method.baseline) {
            case BaselineKind::Powell: {
                PowellConfig pc = config.powell;
                outcome.trace = powell_optimize(objective, x0, pc,
                                                make_objective_gradient(objective));
                break;
            }
            case BaselineKind::Lbfgs: {
                LbfgsConfig lc = config.lbfgs;
                outcome.trace = lbfgs_optimize(objective, x0, lc,
                                               make_objective_gradient(objective));
                break;
            }
            case BaselineKind::None: {
                PivotSchedule schedule =
                    build_pivot_schedule(method.schedule, objective.circuit());
                schedule.randomize = method.randomize;
                schedule.rng_seed = config.rand_seed;
                AcceleratorConfig accel = config.accel;
                accel.kind = method.accelerator;
                outcome.trace =
                    jacobi_optimize(objective, x0, schedule, config.sweep, accel);
                break;
            }
        }
    } catch (const std::exception& e) {
        outcome.failed = true;
        outcome.error = e.what();
    }
    return outcome;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result;
    for (const MethodSpec& method : config.methods) {
        log_info("running " + method.name);
        result.outcomes.push_back(run_method(config, method));
        const MethodOutcome& o = result.outcomes.back();
        if (o.failed) {
            log_info(method.name + " failed: " + o.error);
        } else {
            log_info(method.name + ": " + std::to_string(o.trace.records.size() - 1) +
                     " iterations, " + std::to_string(o.trace.total_evals()) +
                     " evaluations");
        }
    }
    return result;
}

int run_experiment_to_files(const ExperimentConfig& config,
                            const std::filesystem::path& output_dir) {
    std::filesystem::create_directories(output_dir);
    const ExperimentResult result = run_experiment(config);

    nlohmann::ordered_json summary;
    summary["problem"] = {{"n_qubits", config.problem.n_qubits},
                          {"entangler_layers", config.problem.entangler_layers},
                          {"n_references", config.problem.n_references}};
    nlohmann::ordered_json methods = nlohmann::ordered_json::object();

    bool any_failed = false;
    for (const MethodOutcome& outcome : result.outcomes) {
        nlohmann::ordered_json entry;
        if (outcome.failed) {
            any_failed = true;
            entry["failed"] = true;
            entry["error"] = outcome.error;
        } else {
            const std::filesystem::path trace_path =
                output_dir / (outcome.method + ".csv");
            std::ofstream out(trace_path);
            if (!out) {
                throw InvalidInputError("cannot write trace file: " +
                                        trace_path.string());
            }
            write_trace_csv(outcome.trace, out, config.record_wall_time);

            const TraceRecord& last = outcome.trace.records.back();
            entry["failed"] = false;
            entry["final_objective"] = last.objective;
            entry["final_max_gradient"] = last.max_abs_gradient;
            entry["iterations"] = last.iteration;
            entry["converged"] = outcome.trace.converged;
            entry["total_evals"] = outcome.trace.total_evals();
            entry["trace_file"] = trace_path.filename().string();
            if (!outcome.trace.note.empty()) entry["note"] = outcome.trace.note;
        }
        methods[outcome.method] = std::move(entry);
    }
    summary["methods"] = std::move(methods);

    const std::filesystem::path summary_path = output_dir / "summary.json";
    std::ofstream out(summary_path);
    out << summary.dump(2) << "\n";
    log_info("wrote " + summary_path.string());
    return any_failed ? 1 : 0;
}

std::vector<BudgetLine> count_budgets(const ExperimentConfig& config) {
    const ParamCircuit circuit = build_entangler_circuit(
        config.problem.n_qubits, config.problem.entangler_layers);
    const long long p = circuit.n_params();

    std::vector<BudgetLine> lines;
    for (const MethodSpec& method : config.methods) {
        BudgetLine line;
        line.method = method.name;
        switch (method.baseline) {
            case BaselineKind::Powell:
                line.band_low = (p + 1) * 10;
                line.band_high = (p + 1) * 17;
                line.detail = "bidirectional line search per direction, "
                              "~12-14 evaluations each";
                lines.push_back(std::move(line));
                continue;
            case BaselineKind::Lbfgs:
                line.band_low = 2 * p + 1;
                line.band_high = 2 * p + 8;
                line.detail = "gradient (2P) plus backtracking steps";
                lines.push_back(std::move(line));
                continue;
            case BaselineKind::None:
                break;
        }
        const PivotSchedule schedule = build_pivot_schedule(method.schedule, circuit);
        long long sweep = 0;
        for (const ClusterSpec& c : schedule.clusters) {
            sweep += static_cast<long long>(c.grid_size());
        }
        if (config.sweep.reuse_center && method.schedule == ScheduleKind::Jacobi1 &&
            circuit.max_multiplicity() == 1) {
            sweep = 2 * p + 1;
        }
        line.exact = sweep;
        line.detail = std::to_string(schedule.clusters.size()) + " clusters";
        if (method.accelerator == Accelerator::Pulay) {
            long long grad = 0;
            if (circuit.max_multiplicity() == 1) {
                grad = 2 * p;
            } else {
                for (int d = 0; d < circuit.n_params(); ++d) {
                    grad += 2 * circuit.multiplicity(d) + 1;
                }
            }
            line.exact = sweep + grad + 1;
            line.detail += ", plus gradient and trace objective";
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

} // namespace vqopt
