#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vqopt/config.hpp"
#include "vqopt/trace.hpp"

namespace vqopt {

struct MethodOutcome {
    std::string method;
    OptTrace trace;
    bool failed = false;
    std::string error;
};

struct ExperimentResult {
    std::vector<MethodOutcome> outcomes;
};

/// Runs every configured method from the same initial parameter vector on
/// independent Objective instances (fresh counters). A method that throws is
/// recorded as failed; the others are unaffected.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Runs one method by name; exposed for the dry-run and tests.
MethodOutcome run_method(const ExperimentConfig& config, const MethodSpec& method);

/// run_experiment plus one CSV trace per method and a JSON summary in
/// output_dir. Returns 0 when every method finished.
int run_experiment_to_files(const ExperimentConfig& config,
                            const std::filesystem::path& output_dir);

struct BudgetLine {
    std::string method;
    long long exact = -1;       // -1 when only a band is known
    long long band_low = 0;
    long long band_high = 0;
    std::string detail;
};

/// Per-iteration observable budget per method, computed from the schedule
/// sizes alone (no simulation).
std::vector<BudgetLine> count_budgets(const ExperimentConfig& config);

} // namespace vqopt
