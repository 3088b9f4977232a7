#include "vqopt/trace.hpp"

#include <cstdio>
#include <ostream>

namespace vqopt {

namespace {

void append_double(std::string& line, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    line += buf;
}

} // namespace

void write_trace_csv(const OptTrace& trace, std::ostream& out,
                     bool include_wall_time) {
    out << "iteration,objective,max_abs_gradient,cumulative_evals,wall_time_ms\n";
    for (const TraceRecord& r : trace.records) {
        std::string line = std::to_string(r.iteration);
        line += ',';
        append_double(line, r.objective);
        line += ',';
        append_double(line, r.max_abs_gradient);
        line += ',';
        line += std::to_string(r.cumulative_evals);
        line += ',';
        append_double(line, include_wall_time ? r.wall_time_ms : 0.0);
        line += '\n';
        out << line;
    }
}

} // namespace vqopt
