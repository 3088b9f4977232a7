#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "vqopt/diis.hpp"
#include "vqopt/tomography.hpp"
#include "vqopt/trace.hpp"

namespace vqopt {

enum class ScheduleKind { Jacobi1, Jacobi2, JacobiA, JacobiB, Custom };

/// Ordered cluster list for one sweep. With randomize set, every logical
/// iteration draws a fresh permutation from a generator seeded with
/// rng_seed, so runs stay reproducible.
struct PivotSchedule {
    std::vector<ClusterSpec> clusters;
    bool randomize = false;
    std::uint64_t rng_seed = 0;
};

/// Jacobi1: all single angles in lexical order. Jacobi2: all pairs
/// (g > g'), lexical. JacobiA: pairs whose Ry gates share a qubit wire.
/// JacobiB: JacobiA plus pairs on linearly adjacent wires (|q - q'| == 1).
PivotSchedule build_pivot_schedule(ScheduleKind kind, const ParamCircuit& circuit);

/// User-specified cluster list, validated against the circuit.
PivotSchedule custom_schedule(const ParamCircuit& circuit,
                              const std::vector<std::vector<int>>& clusters);

struct SweepConfig {
    int max_iterations = 100;
    double grad_tolerance = 1e-7;
    bool reuse_center = false;
    std::size_t grid_cap = default_grid_cap;
};

/// Called after each cluster move with the cluster, the updated full
/// parameter vector, and the model value at the new point.
using MoveObserver = std::function<void(const ClusterSpec&, std::span<const double>,
                                        double)>;

struct SweepResult {
    std::vector<double> params;
    long long evals_used = 0;
    /// Objective value at the returned parameters, carried from the last
    /// cluster's optimized model (exact in noiseless simulation).
    std::optional<double> value;
};

/// One pass over the schedule: fit each cluster, minimize the surrogate
/// seeded at the current angles, write the optimal angles back. Each move
/// is monotone within 1e-12 on the surrogate. With reuse_center, singleton
/// order-1 clusters use quadrature grids centered on the current angle and
/// carry the center value from the previous model (2P+1 evaluations per
/// sweep instead of 3P); the carry never crosses a sweep boundary.
SweepResult jacobi_sweep(Objective& objective, std::span<const double> params,
                         const PivotSchedule& schedule, const SweepConfig& config = {},
                         std::mt19937_64* rng = nullptr,
                         const MoveObserver& observer = {});

enum class Accelerator { None, Anderson, Pulay };

struct AcceleratorConfig {
    Accelerator kind = Accelerator::None;
    std::size_t history_capacity = 10;
    int flush_period = 40;
};

/// Fixed-point driver: iterates sweeps, interleaving DIIS per the variant's
/// sequence (Anderson inserts the post-sweep displacement; Pulay inserts the
/// gradient before the next sweep). Stops when the max gradient component
/// falls below config.grad_tolerance or after max_iterations. Randomized
/// pivots cannot be combined with an accelerator.
OptTrace jacobi_optimize(Objective& objective, std::span<const double> initial,
                         const PivotSchedule& schedule, const SweepConfig& config = {},
                         const AcceleratorConfig& accel = {});

} // namespace vqopt
