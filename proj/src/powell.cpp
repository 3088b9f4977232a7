#include "vqopt/powell.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

class AxisFunction {
public:
    AxisFunction(CountedFunction& f, std::span<const double> point,
                 std::span<const double> direction)
        : f_(f), point_(point.begin(), point.end()),
          direction_(direction.begin(), direction.end()),
          work_(point.begin(), point.end()) {}

    double operator()(double t) {
        for (std::size_t i = 0; i < work_.size(); ++i) {
            work_[i] = point_[i] + t * direction_[i];
        }
        return f_.evaluate(work_);
    }

private:
    CountedFunction& f_;
    std::vector<double> point_;
    std::vector<double> direction_;
    std::vector<double> work_;
};

struct Bracket {
    double a, b, c;    // a < b < c with f(b) <= min(f(a), f(c))
    double fa, fb, fc;
    bool at_cap = false;
    double cap_step = 0.0, cap_value = 0.0;
    double cap_prev = 0.0; // last interior probe before the cap was hit
};

/// Expands from 0 in the descent direction by the growth factor up to the
/// cap. sign selects the direction.
bool expand_bracket(AxisFunction& f, double f0, double sign,
                    const LineSearchConfig& cfg, double t1, double f1, Bracket& out) {
    double t_prev = 0.0, f_prev = f0;
    double t_cur = t1, f_cur = f1;
    while (true) {
        double t_next = t_cur * cfg.growth;
        if (std::abs(t_next) > cfg.max_step) {
            if (std::abs(t_cur) >= cfg.max_step) {
                // still descending at the cap
                out.at_cap = true;
                out.cap_step = t_cur;
                out.cap_value = f_cur;
                return true;
            }
            t_next = sign * cfg.max_step;
        }
        const double f_next = f(t_next);
        if (f_next >= f_cur) {
            out.a = std::min(t_prev, t_next);
            out.c = std::max(t_prev, t_next);
            out.b = t_cur;
            out.fb = f_cur;
            out.fa = (out.a == t_prev) ? f_prev : f_next;
            out.fc = (out.c == t_next) ? f_next : f_prev;
            return true;
        }
        t_prev = t_cur;
        f_prev = f_cur;
        t_cur = t_next;
        f_cur = f_next;
        if (std::abs(t_cur) >= cfg.max_step) {
            out.at_cap = true;
            out.cap_step = t_cur;
            out.cap_value = f_cur;
            return true;
        }
    }
}

/// Brent minimization on a bracketed interval.
void brent_refine(AxisFunction& f, Bracket& br, const LineSearchConfig& cfg,
                  double& best_t, double& best_f) {
    constexpr double gold = 0.3819660112501051;
    double a = br.a, b = br.c;
    double x = br.b, w = br.b, v = br.b;
    double fx = br.fb, fw = br.fb, fv = br.fb;
    double d = 0.0, e = 0.0;
    int small_steps = 0;
    for (int it = 0; it < cfg.max_refine_iterations; ++it) {
        const double m = 0.5 * (a + b);
        const double tol = cfg.tolerance + 1e-15 * std::abs(x);
        if (std::abs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;
        // superlinear endgame: once the probes shrink to the tolerance the
        // minimizer is pinned; waiting for the full bracket collapse only
        // burns evaluations
        if (small_steps >= 2) break;
        double trial = 0.0;
        bool parabolic = false;
        if (std::abs(e) > tol) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                trial = x + d;
                if (trial - a < 2.0 * tol || b - trial < 2.0 * tol) {
                    d = (m > x) ? tol : -tol;
                }
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        trial = (std::abs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
        if (std::abs(trial - x) <= 2.0 * tol) {
            ++small_steps;
        } else {
            small_steps = 0;
        }
        const double ft = f(trial);
        // adjacent probes whose values agree to machine noise carry no
        // information about the minimizer; further probes would dither.
        // The proximity guard matters: symmetric objectives produce equal
        // values at points mirrored about the minimum.
        if (std::abs(trial - x) <= 1e-6 &&
            std::abs(ft - fx) <=
                8.0 * std::numeric_limits<double>::epsilon() *
                    (std::abs(fx) + std::abs(ft) + 1e-12)) {
            if (ft < fx) {
                x = trial;
                fx = ft;
            }
            break;
        }
        if (ft <= fx) {
            if (trial >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = trial; fx = ft;
        } else {
            if (trial < x) a = trial; else b = trial;
            if (ft <= fw || w == x) {
                v = w; fv = fw;
                w = trial; fw = ft;
            } else if (ft <= fv || v == x || v == w) {
                v = trial; fv = ft;
            }
        }
    }
    best_t = x;
    best_f = fx;
}

LineSearchResult search_impl(CountedFunction& f, std::span<const double> point,
                             std::span<const double> direction, double f0,
                             const LineSearchConfig& cfg) {
    double dir_norm = 0.0;
    for (double d : direction) dir_norm += d * d;
    if (!(dir_norm > 0.0)) {
        throw InvalidInputError("line_search: zero direction");
    }

    AxisFunction axis(f, point, direction);
    const long long evals_before = f.evals();

    const double fp = axis(cfg.initial_step);
    const double fm = axis(-cfg.initial_step);

    Bracket br{};
    if (fp >= f0 && fm >= f0) {
        br = Bracket{-cfg.initial_step, 0.0, cfg.initial_step, fm, f0, fp};
    } else {
        const double sign = (fp < fm) ? 1.0 : -1.0;
        const double f1 = (sign > 0.0) ? fp : fm;
        expand_bracket(axis, f0, sign, cfg, sign * cfg.initial_step, f1, br);
    }

    double best_t, best_f;
    if (br.at_cap) {
        best_t = br.cap_step;
        best_f = br.cap_value;
    } else {
        brent_refine(axis, br, cfg, best_t, best_f);
    }

    LineSearchResult result;
    result.evals = f.evals() - evals_before;
    if (best_f < f0) {
        result.step = best_t;
        result.value = best_f;
    } else {
        result.step = 0.0;
        result.value = f0;
    }
    return result;
}

} // namespace

LineSearchResult line_search(CountedFunction& f, std::span<const double> point,
                             std::span<const double> direction,
                             const LineSearchConfig& config) {
    std::vector<double> x(point.begin(), point.end());
    const long long before = f.evals();
    const double f0 = f.evaluate(x);
    LineSearchResult r = search_impl(f, point, direction, f0, config);
    r.evals = f.evals() - before;
    return r;
}

LineSearchResult line_search_from(CountedFunction& f, std::span<const double> point,
                                  std::span<const double> direction, double f0,
                                  const LineSearchConfig& config) {
    return search_impl(f, point, direction, f0, config);
}

OptTrace powell_optimize(CountedFunction& f, std::span<const double> initial,
                         const PowellConfig& config, const GradientFn& gradient) {
    const int n = static_cast<int>(initial.size());
    if (n < 1) throw InvalidInputError("powell_optimize: empty initial point");
    if (f.dimension() != n) {
        throw InvalidInputError("powell_optimize: dimension mismatch");
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };
    auto max_abs = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };

    // Coordinate axes as the initial direction set.
    std::vector<std::vector<double>> directions(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) directions[i][i] = 1.0;

    OptTrace trace;
    std::vector<double> x(initial.begin(), initial.end());

    const long long mark0 = f.evals();
    double fx = f.evaluate(x);
    std::vector<double> gx = gradient(x);
    trace.records.push_back(TraceRecord{0, fx, max_abs(gx), f.evals(), elapsed_ms(),
                                        0, f.evals() - mark0});
    trace.converged = max_abs(gx) < config.grad_tolerance;

    for (int k = 1; k <= config.max_iterations && !trace.converged; ++k) {
        const long long mark = f.evals();
        const std::vector<double> x_start = x;

        int best_dir = 0;
        double best_drop = -1.0;
        for (int i = 0; i < n; ++i) {
            const LineSearchResult ls =
                line_search_from(f, x, directions[i], fx, config.line_search);
            const double drop = fx - ls.value;
            if (drop > best_drop) {
                best_drop = drop;
                best_dir = i;
            }
            for (int j = 0; j < n; ++j) x[j] += ls.step * directions[i][j];
            fx = ls.value;
        }

        // Net displacement becomes a new (normalized) direction, replacing
        // the one that contributed the most; it is searched immediately.
        std::vector<double> disp(n);
        double disp_norm = 0.0;
        for (int j = 0; j < n; ++j) {
            disp[j] = x[j] - x_start[j];
            disp_norm += disp[j] * disp[j];
        }
        disp_norm = std::sqrt(disp_norm);
        if (disp_norm > 1e-14) {
            for (int j = 0; j < n; ++j) disp[j] /= disp_norm;
            const LineSearchResult ls =
                line_search_from(f, x, disp, fx, config.line_search);
            for (int j = 0; j < n; ++j) x[j] += ls.step * disp[j];
            fx = ls.value;
            directions[best_dir] = disp;
        }
        const long long method_evals = f.evals() - mark;

        gx = gradient(x);
        const long long diagnostic_evals = f.evals() - mark - method_evals;
        trace.records.push_back(TraceRecord{k, fx, max_abs(gx), f.evals(),
                                            elapsed_ms(), method_evals,
                                            diagnostic_evals});
        trace.converged = max_abs(gx) < config.grad_tolerance;
        if (config.direction_observer) config.direction_observer(directions);
    }

    trace.final_params = std::move(x);
    return trace;
}

} // namespace vqopt
