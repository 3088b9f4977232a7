#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vqopt/objective.hpp"
#include "vqopt/trace.hpp"

namespace vqopt {

/// Bidirectional bracketing around step 0 (initial step, geometric growth,
/// period-aware cap) followed by parabolic-interpolation refinement with a
/// golden-section safeguard down to the angle tolerance.
struct LineSearchConfig {
    double initial_step = 0.39269908169872414; // pi/8
    double growth = 2.0;
    double max_step = 1.5707963267948966; // pi/2
    double tolerance = 1e-10;
    int max_refine_iterations = 100;
};

struct LineSearchResult {
    double step = 0.0;
    double value = 0.0;
    long long evals = 0;
};

/// Minimizes f(point + step * direction) over step. Returns step 0 and the
/// value at the starting point when no descent is found in either direction
/// within the bracket cap.
LineSearchResult line_search(CountedFunction& f, std::span<const double> point,
                             std::span<const double> direction,
                             const LineSearchConfig& config = {});

/// Variant with the value at step 0 already known (saves one evaluation).
LineSearchResult line_search_from(CountedFunction& f, std::span<const double> point,
                                  std::span<const double> direction, double f0,
                                  const LineSearchConfig& config = {});

struct PowellConfig {
    int max_iterations = 100;
    double grad_tolerance = 1e-7;
    LineSearchConfig line_search;
    /// Test hook: observes the direction set at the end of each iteration.
    std::function<void(const std::vector<std::vector<double>>&)> direction_observer;
};

/// Powell's conjugate-direction method. The direction set starts as the
/// coordinate axes; each iteration line-searches every direction, then
/// searches the normalized net displacement and swaps it in for the
/// direction that contributed the most. The gradient is evaluated once per
/// iteration for the stopping rule and the trace only.
OptTrace powell_optimize(CountedFunction& f, std::span<const double> initial,
                         const PowellConfig& config, const GradientFn& gradient);

} // namespace vqopt
