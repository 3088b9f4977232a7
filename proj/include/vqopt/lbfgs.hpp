#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vqopt/objective.hpp"
#include "vqopt/trace.hpp"

namespace vqopt {

struct LbfgsConfig {
    int memory = 10;
    int max_iterations = 100;
    double grad_tolerance = 1e-7;
    double backtrack_factor = 0.5;
    double sufficient_decrease = 1e-4; // Armijo constant
    int max_backtracks = 30;
    /// Test hook: observes each stored (s, y) pair.
    std::function<void(std::span<const double>, std::span<const double>)> pair_observer;
};

/// Limited-memory BFGS with the two-loop recursion and a backtracking line
/// search under the sufficient-decrease condition. Pairs are stored only
/// when the curvature condition s.y > 0 holds. A failed line search restarts
/// from steepest descent; two consecutive failures terminate the run with a
/// diagnostic in the trace note.
OptTrace lbfgs_optimize(CountedFunction& f, std::span<const double> initial,
                        const LbfgsConfig& config, const GradientFn& gradient);

} // namespace vqopt
