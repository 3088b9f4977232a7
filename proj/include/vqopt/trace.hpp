#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vqopt {

/// One row per logical iteration. cumulative_evals snapshots the objective
/// counter. evals_method is the intrinsic cost of the iteration (sweep or
/// line searches plus whatever the accelerator itself consumes);
/// evals_diagnostic covers the stopping-rule gradient and trace bookkeeping
/// when those are not intrinsic to the method. Record 0 describes the
/// initial point (evals_method = 0).
struct TraceRecord {
    int iteration = 0;
    double objective = 0.0;
    double max_abs_gradient = 0.0;
    long long cumulative_evals = 0;
    double wall_time_ms = 0.0;
    long long evals_method = 0;
    long long evals_diagnostic = 0;
};

struct OptTrace {
    std::vector<TraceRecord> records;
    std::vector<double> final_params;
    bool converged = false;
    std::string note;

    long long total_evals() const {
        return records.empty() ? 0 : records.back().cumulative_evals;
    }
};

/// CSV with the stable schema: iteration, objective, max_abs_gradient,
/// cumulative_evals, wall_time_ms. Wall times are written as 0 when
/// include_wall_time is false, which makes the file reproducible.
void write_trace_csv(const OptTrace& trace, std::ostream& out, bool include_wall_time);

} // namespace vqopt
