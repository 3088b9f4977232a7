#include "vqopt/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

constexpr double pi = std::numbers::pi;

bool wires_intersect(const std::vector<int>& a, const std::vector<int>& b) {
    for (int qa : a) {
        for (int qb : b) {
            if (qa == qb) return true;
        }
    }
    return false;
}

bool wires_adjacent(const std::vector<int>& a, const std::vector<int>& b) {
    for (int qa : a) {
        for (int qb : b) {
            if (std::abs(qa - qb) == 1) return true;
        }
    }
    return false;
}

/// Deterministic Fisher-Yates (std::shuffle is implementation-defined).
void shuffle_indices(std::vector<std::size_t>& order, std::mt19937_64& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

PivotSchedule build_pivot_schedule(ScheduleKind kind, const ParamCircuit& circuit) {
    const int p = circuit.n_params();
    if (p < 1) {
        throw InvalidInputError("build_pivot_schedule: circuit has no parameters");
    }
    circuit.validate();
    PivotSchedule schedule;
    switch (kind) {
        case ScheduleKind::Jacobi1:
            for (int d = 0; d < p; ++d) {
                schedule.clusters.push_back(make_cluster(circuit, {d}));
            }
            break;
        case ScheduleKind::Jacobi2:
            for (int a = 0; a < p; ++a) {
                for (int b = a + 1; b < p; ++b) {
                    schedule.clusters.push_back(make_cluster(circuit, {a, b}));
                }
            }
            break;
        case ScheduleKind::JacobiA:
        case ScheduleKind::JacobiB: {
            std::vector<std::vector<int>> wires(p);
            for (int d = 0; d < p; ++d) wires[d] = circuit.param_wires(d);
            for (int a = 0; a < p; ++a) {
                for (int b = a + 1; b < p; ++b) {
                    const bool shared = wires_intersect(wires[a], wires[b]);
                    const bool adjacent = wires_adjacent(wires[a], wires[b]);
                    if (shared || (kind == ScheduleKind::JacobiB && adjacent)) {
                        schedule.clusters.push_back(make_cluster(circuit, {a, b}));
                    }
                }
            }
            break;
        }
        case ScheduleKind::Custom:
            throw InvalidInputError("build_pivot_schedule: use custom_schedule "
                                    "for Custom");
    }
    return schedule;
}

PivotSchedule custom_schedule(const ParamCircuit& circuit,
                              const std::vector<std::vector<int>>& clusters) {
    if (clusters.empty()) {
        throw InvalidInputError("custom_schedule: empty cluster list");
    }
    PivotSchedule schedule;
    std::vector<bool> covered(circuit.n_params(), false);
    for (const auto& indices : clusters) {
        ClusterSpec c = make_cluster(circuit, indices);
        for (int d : c.param_indices) covered[d] = true;
        schedule.clusters.push_back(std::move(c));
    }
    for (int d = 0; d < circuit.n_params(); ++d) {
        if (!covered[d]) {
            throw InvalidInputError("custom_schedule: parameter " + std::to_string(d) +
                                    " appears in no cluster");
        }
    }
    return schedule;
}

SweepResult jacobi_sweep(Objective& objective, std::span<const double> params,
                         const PivotSchedule& schedule, const SweepConfig& config,
                         std::mt19937_64* rng, const MoveObserver& observer) {
    if (schedule.clusters.empty()) {
        throw InvalidInputError("jacobi_sweep: empty schedule");
    }
    std::vector<double> x(params.begin(), params.end());
    const long long evals_before = objective.evals();

    std::vector<std::size_t> order(schedule.clusters.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 local_rng(schedule.rng_seed);
    if (schedule.randomize) {
        shuffle_indices(order, rng ? *rng : local_rng);
    }

    std::optional<double> carried; // objective value at the current x
    for (std::size_t slot : order) {
        const ClusterSpec& cluster = schedule.clusters[slot];
        std::vector<double> seed(cluster.size());
        for (std::size_t d = 0; d < cluster.size(); ++d) {
            seed[d] = x[cluster.param_indices[d]];
        }

        TomographyModel model = [&] {
            if (config.reuse_center && cluster.size() == 1 && cluster.orders[0] == 1) {
                const double center = seed[0];
                const std::vector<std::vector<double>> grids = {
                    {center - pi / 3.0, center, center + pi / 3.0}};
                std::vector<double> work = x;
                const int idx = cluster.param_indices[0];
                work[idx] = grids[0][0];
                const double lo = objective.evaluate(work);
                const double mid = carried ? *carried : [&] {
                    work[idx] = center;
                    return objective.evaluate(work);
                }();
                work[idx] = grids[0][2];
                const double hi = objective.evaluate(work);
                const double samples[3] = {lo, mid, hi};
                return fit_from_samples(cluster, grids, samples, x);
            }
            return fit_cluster(objective, x, cluster, config.grid_cap);
        }();

        const double before = model.eval(seed);
        const std::vector<double> opt = optimize_model(model, seed);
        const double after = model.eval(opt);
        if (after > before + 1e-12) {
            throw InternalError("jacobi_sweep: cluster move increased the objective");
        }
        for (std::size_t d = 0; d < cluster.size(); ++d) {
            x[cluster.param_indices[d]] = opt[d];
        }
        carried = after;
        if (observer) observer(cluster, x, after);
    }

    return SweepResult{std::move(x), objective.evals() - evals_before, carried};
}

OptTrace jacobi_optimize(Objective& objective, std::span<const double> initial,
                         const PivotSchedule& schedule, const SweepConfig& config,
                         const AcceleratorConfig& accel) {
    if (schedule.randomize && accel.kind != Accelerator::None) {
        throw InvalidInputError("jacobi_optimize: randomized pivots cannot be "
                                "combined with DIIS acceleration");
    }
    if (config.max_iterations < 1) {
        throw InvalidInputError("jacobi_optimize: max_iterations must be >= 1");
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    GradientFn gradient = make_objective_gradient(objective);
    std::mt19937_64 rng(schedule.rng_seed);
    DIISHistory history(accel.history_capacity, accel.flush_period);

    OptTrace trace;
    std::vector<double> x(initial.begin(), initial.end());

    // Record the starting point. For Pulay this gradient doubles as the
    // first DIIS error vector and the objective is taken at the (identity)
    // extrapolation, so the whole record is intrinsic to the method.
    long long mark = objective.evals();
    double fx = objective.evaluate(x);
    std::vector<double> gx = gradient(x);
    if (accel.kind == Accelerator::Pulay) {
        x = accelerate_step(history, DIISVariant::Pulay, x, {},
                            [&gx] { return gx; });
    }
    const long long initial_evals = objective.evals() - mark;
    trace.records.push_back(TraceRecord{
        0, fx, max_abs(gx), objective.evals(), elapsed_ms(),
        accel.kind == Accelerator::Pulay ? initial_evals : 0,
        accel.kind == Accelerator::Pulay ? 0 : initial_evals});
    trace.converged = max_abs(gx) < config.grad_tolerance;

    for (int k = 1; k <= config.max_iterations && !trace.converged; ++k) {
        mark = objective.evals();
        long long method_evals = 0;
        long long diagnostic_evals = 0;

        SweepResult sweep = jacobi_sweep(objective, x, schedule, config, &rng, {});
        method_evals += sweep.evals_used;

        switch (accel.kind) {
            case Accelerator::None: {
                x = std::move(sweep.params);
                fx = sweep.value ? *sweep.value : objective.evaluate(x);
                long long before_grad = objective.evals();
                diagnostic_evals += before_grad - mark - sweep.evals_used;
                gx = gradient(x);
                diagnostic_evals += objective.evals() - before_grad;
                break;
            }
            case Accelerator::Anderson: {
                x = accelerate_step(history, DIISVariant::Anderson, sweep.params, x,
                                    {});
                long long before = objective.evals();
                fx = objective.evaluate(x);
                gx = gradient(x);
                diagnostic_evals += objective.evals() - before;
                break;
            }
            case Accelerator::Pulay: {
                // Gradient at the sweep output is the DIIS error vector and
                // the stopping quantity; the trace objective sits at the
                // extrapolated iterate the next sweep starts from.
                long long before = objective.evals();
                gx = gradient(sweep.params);
                x = accelerate_step(history, DIISVariant::Pulay, sweep.params, {},
                                    [&gx] { return gx; });
                fx = objective.evaluate(x);
                method_evals += objective.evals() - before;
                break;
            }
        }

        trace.records.push_back(TraceRecord{k, fx, max_abs(gx), objective.evals(),
                                            elapsed_ms(), method_evals,
                                            diagnostic_evals});
        trace.converged = max_abs(gx) < config.grad_tolerance;
    }

    trace.final_params = std::move(x);
    return trace;
}

} // namespace vqopt
