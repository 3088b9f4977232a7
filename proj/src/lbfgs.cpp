#include "vqopt/lbfgs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

struct Pair {
    std::vector<double> s, y;
    double rho = 0.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Two-loop recursion: returns -H g.
std::vector<double> descent_direction(const std::deque<Pair>& pairs,
                                      const std::vector<double>& g) {
    std::vector<double> q = g;
    std::vector<double> alpha(pairs.size());
    for (std::size_t i = pairs.size(); i-- > 0;) {
        alpha[i] = pairs[i].rho * dot(pairs[i].s, q);
        for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * pairs[i].y[j];
    }
    if (!pairs.empty()) {
        const Pair& last = pairs.back();
        const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double beta = pairs[i].rho * dot(pairs[i].y, q);
        for (std::size_t j = 0; j < q.size(); ++j) {
            q[j] += (alpha[i] - beta) * pairs[i].s[j];
        }
    }
    for (double& v : q) v = -v;
    return q;
}

} // namespace

OptTrace lbfgs_optimize(CountedFunction& f, std::span<const double> initial,
                        const LbfgsConfig& config, const GradientFn& gradient) {
    const std::size_t n = initial.size();
    if (n < 1) throw InvalidInputError("lbfgs_optimize: empty initial point");
    if (f.dimension() != static_cast<int>(n)) {
        throw InvalidInputError("lbfgs_optimize: dimension mismatch");
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    OptTrace trace;
    std::vector<double> x(initial.begin(), initial.end());
    std::deque<Pair> pairs;

    const long long mark0 = f.evals();
    double fx = f.evaluate(x);
    std::vector<double> gx = gradient(x);
    trace.records.push_back(TraceRecord{0, fx, max_abs(gx), f.evals(), elapsed_ms(),
                                        f.evals() - mark0, 0});
    trace.converged = max_abs(gx) < config.grad_tolerance;

    for (int k = 1; k <= config.max_iterations && !trace.converged; ++k) {
        const long long mark = f.evals();

        std::vector<double> dir = descent_direction(pairs, gx);
        double slope = dot(dir, gx);
        if (!(slope < 0.0)) {
            pairs.clear();
            dir = gx;
            for (double& v : dir) v = -v;
            slope = dot(dir, gx);
        }

        double f_new = fx;
        std::vector<double> x_new(n);
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1) { // restart from steepest descent
                pairs.clear();
                dir = gx;
                for (double& v : dir) v = -v;
                slope = dot(dir, gx);
            }
            double step = 1.0;
            for (int bt = 0; bt < config.max_backtracks; ++bt) {
                for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + step * dir[j];
                f_new = f.evaluate(x_new);
                if (f_new <= fx + config.sufficient_decrease * step * slope) {
                    accepted = true;
                    break;
                }
                step *= config.backtrack_factor;
            }
        }
        if (!accepted) {
            trace.note = "line search failed after steepest-descent restart";
            trace.records.push_back(TraceRecord{k, fx, max_abs(gx), f.evals(),
                                                elapsed_ms(), f.evals() - mark, 0});
            break;
        }

        const std::vector<double> g_new = gradient(x_new);
        Pair pair;
        pair.s.resize(n);
        pair.y.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            pair.s[j] = x_new[j] - x[j];
            pair.y[j] = g_new[j] - gx[j];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-14) {
            pair.rho = 1.0 / sy;
            if (config.pair_observer) config.pair_observer(pair.s, pair.y);
            pairs.push_back(std::move(pair));
            if (static_cast<int>(pairs.size()) > config.memory) pairs.pop_front();
        }

        x = std::move(x_new);
        fx = f_new;
        gx = g_new;
        trace.records.push_back(TraceRecord{k, fx, max_abs(gx), f.evals(),
                                            elapsed_ms(), f.evals() - mark, 0});
        trace.converged = max_abs(gx) < config.grad_tolerance;
    }

    trace.final_params = std::move(x);
    return trace;
}

} // namespace vqopt
