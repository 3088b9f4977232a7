#include "vqopt/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<int> dims_of(const ClusterSpec& cluster) {
    std::vector<int> dims(cluster.size());
    for (std::size_t d = 0; d < cluster.size(); ++d) {
        dims[d] = 2 * cluster.orders[d] + 1;
    }
    return dims;
}

/// out[..., r, ...] = sum_p m(r, p) in[..., p, ...] along one axis of a
/// row-major tensor.
std::vector<double> apply_along_axis(const Eigen::MatrixXd& m,
                                     const std::vector<double>& in,
                                     const std::vector<int>& dims, int axis) {
    std::size_t inner = 1;
    for (std::size_t d = axis + 1; d < dims.size(); ++d) inner *= dims[d];
    const std::size_t len = dims[axis];
    const std::size_t block = inner * len;
    const std::size_t outer = in.size() / block;

    std::vector<double> out(in.size(), 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * block;
        for (std::size_t r = 0; r < len; ++r) {
            for (std::size_t p = 0; p < len; ++p) {
                const double w = m(static_cast<Eigen::Index>(r),
                                   static_cast<Eigen::Index>(p));
                if (w == 0.0) continue;
                const double* src = in.data() + base + p * inner;
                double* dst = out.data() + base + r * inner;
                for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
            }
        }
    }
    return out;
}

/// Full contraction of a coefficient tensor with one vector per axis.
double contract_all(const std::vector<double>& coeffs, const std::vector<int>& dims,
                    const std::vector<std::vector<double>>& vectors) {
    const std::size_t m = dims.size();
    double total = 0.0;
    std::vector<std::size_t> digit(m, 0);
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        double prod = coeffs[flat];
        if (prod != 0.0) {
            for (std::size_t d = 0; d < m; ++d) prod *= vectors[d][digit[d]];
            total += prod;
        }
        for (std::size_t d = m; d-- > 0;) {
            if (++digit[d] < static_cast<std::size_t>(dims[d])) break;
            digit[d] = 0;
        }
    }
    return total;
}

std::vector<double> basis_vector(int order, double theta,
                                 double (*fn)(int, double)) {
    std::vector<double> v(2 * order + 1);
    for (int i = -order; i <= order; ++i) v[i + order] = fn(i, theta);
    return v;
}

/// Wraps into [-pi/2, pi/2).
double wrap_half(double theta) {
    return theta - pi * std::floor(theta / pi + 0.5);
}

/// Minimum of the 1D restriction sum_i profile[i+G] phi_i(theta). Order 1
/// has the closed-form arctan2 solution; higher orders get a dense scan
/// plus guarded Newton refinement. Returns the current angle unchanged on a
/// flat axis.
double minimize_axis_profile(const std::vector<double>& profile, int order,
                             double current) {
    auto value = [&](double t) {
        double acc = 0.0;
        for (int i = -order; i <= order; ++i) acc += profile[i + order] * basis_function(i, t);
        return acc;
    };
    auto deriv = [&](double t) {
        double acc = 0.0;
        for (int i = -order; i <= order; ++i) acc += profile[i + order] * basis_derivative(i, t);
        return acc;
    };
    auto second = [&](double t) {
        double acc = 0.0;
        for (int i = -order; i <= order; ++i) {
            acc += profile[i + order] * basis_second_derivative(i, t);
        }
        return acc;
    };

    if (order == 1) {
        const auto star = analytic_theta_star(profile[2], profile[0]);
        return star ? *star : current;
    }

    double flat_check = 0.0;
    for (int i = -order; i <= order; ++i) {
        if (i != 0) flat_check = std::max(flat_check, std::abs(profile[i + order]));
    }
    if (flat_check < 1e-14) return current;

    double best_t = wrap_half(current);
    double best_v = value(best_t);
    const int n_scan = 8 * order;
    for (int k = 0; k < n_scan; ++k) {
        const double t = -pi / 2.0 + k * (pi / n_scan);
        const double v = value(t);
        if (v < best_v) {
            best_v = v;
            best_t = t;
        }
    }
    for (int it = 0; it < 60; ++it) {
        const double g = deriv(best_t);
        const double h = second(best_t);
        if (h <= 1e-10) break;
        const double step = -g / h;
        const double cand = best_t + step;
        const double v = value(cand);
        if (v > best_v) break;
        best_t = cand;
        best_v = v;
        if (std::abs(step) < 1e-14) break;
    }
    return wrap_half(best_t);
}

} // namespace

std::size_t ClusterSpec::grid_size() const {
    std::size_t total = 1;
    for (int g : orders) total *= static_cast<std::size_t>(2 * g + 1);
    return total;
}

void ClusterSpec::validate() const {
    if (param_indices.empty()) {
        throw InvalidInputError("ClusterSpec: empty cluster");
    }
    if (param_indices.size() != orders.size()) {
        throw InvalidInputError("ClusterSpec: indices/orders size mismatch");
    }
    for (int g : orders) {
        if (g < 1) throw InvalidInputError("ClusterSpec: order must be >= 1");
    }
    std::vector<int> sorted = param_indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidInputError("ClusterSpec: duplicate parameter index");
    }
    if (sorted.front() < 0) {
        throw InvalidInputError("ClusterSpec: negative parameter index");
    }
}

ClusterSpec make_cluster(const ParamCircuit& circuit, std::vector<int> param_indices) {
    ClusterSpec cluster;
    cluster.param_indices = std::move(param_indices);
    cluster.orders.reserve(cluster.param_indices.size());
    for (int d : cluster.param_indices) {
        cluster.orders.push_back(circuit.multiplicity(d));
    }
    cluster.validate();
    return cluster;
}

double basis_function(int i, double theta) {
    if (i == 0) return 1.0;
    if (i > 0) return std::cos(2.0 * i * theta);
    return std::sin(-2.0 * i * theta);
}

double basis_derivative(int i, double theta) {
    if (i == 0) return 0.0;
    if (i > 0) return -2.0 * i * std::sin(2.0 * i * theta);
    return -2.0 * i * std::cos(-2.0 * i * theta);
}

double basis_second_derivative(int i, double theta) {
    if (i == 0) return 0.0;
    if (i > 0) return -4.0 * i * i * std::cos(2.0 * i * theta);
    return -4.0 * i * i * std::sin(-2.0 * i * theta);
}

std::vector<double> fourier_grid(int order) {
    if (order < 1) {
        throw InvalidInputError("fourier_grid: order must be >= 1");
    }
    if (order == 1) {
        return {-pi / 3.0, 0.0, pi / 3.0};
    }
    const int n = 2 * order + 1;
    std::vector<double> grid(n);
    for (int p = 0; p < n; ++p) {
        grid[p] = (p + 1) * pi / n - pi / 2.0;
    }
    return grid;
}

TransferMatrix transfer_matrix_on_grid(int order, std::span<const double> grid) {
    if (order < 1) {
        throw InvalidInputError("transfer_matrix: order must be >= 1");
    }
    const int n = 2 * order + 1;
    if (static_cast<int>(grid.size()) != n) {
        throw InvalidInputError("transfer_matrix: grid needs 2G+1 angles");
    }
    TransferMatrix t;
    t.order = order;
    t.grid.assign(grid.begin(), grid.end());
    t.forward.resize(n, n);
    for (int p = 0; p < n; ++p) {
        for (int i = -order; i <= order; ++i) {
            t.forward(p, i + order) = basis_function(i, grid[p]);
        }
    }
    t.inverse = t.forward.fullPivLu().inverse();
    const double residual =
        (t.forward * t.inverse - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(residual < 1e-12)) {
        throw InternalError("transfer_matrix: inverse residual " +
                            std::to_string(residual));
    }
    return t;
}

TransferMatrix transfer_matrix(int order) {
    const std::vector<double> grid = fourier_grid(order);
    return transfer_matrix_on_grid(order, grid);
}

TomographyModel::TomographyModel(ClusterSpec cluster, std::vector<double> coefficients,
                                 std::vector<double> frozen_params)
    : cluster_(std::move(cluster)),
      coeffs_(std::move(coefficients)),
      frozen_(std::move(frozen_params)) {
    cluster_.validate();
    if (coeffs_.size() != cluster_.grid_size()) {
        throw InvalidInputError("TomographyModel: coefficient count mismatch");
    }
}

double TomographyModel::coefficient(std::span<const int> digits) const {
    if (digits.size() != cluster_.size()) {
        throw InvalidInputError("coefficient: digit count mismatch");
    }
    std::size_t flat = 0;
    for (std::size_t d = 0; d < digits.size(); ++d) {
        const int g = cluster_.orders[d];
        if (digits[d] < -g || digits[d] > g) {
            throw InvalidInputError("coefficient: digit out of range");
        }
        flat = flat * (2 * g + 1) + static_cast<std::size_t>(digits[d] + g);
    }
    return coeffs_[flat];
}

double TomographyModel::eval(std::span<const double> angles) const {
    const std::size_t m = cluster_.size();
    if (angles.size() != m) {
        throw InvalidInputError("model eval: angle count mismatch");
    }
    std::vector<std::vector<double>> phi(m);
    for (std::size_t d = 0; d < m; ++d) {
        phi[d] = basis_vector(cluster_.orders[d], angles[d], &basis_function);
    }
    return contract_all(coeffs_, dims_of(cluster_), phi);
}

std::vector<double> TomographyModel::gradient(std::span<const double> angles) const {
    const std::size_t m = cluster_.size();
    if (angles.size() != m) {
        throw InvalidInputError("model gradient: angle count mismatch");
    }
    const std::vector<int> dims = dims_of(cluster_);
    std::vector<std::vector<double>> phi(m);
    for (std::size_t d = 0; d < m; ++d) {
        phi[d] = basis_vector(cluster_.orders[d], angles[d], &basis_function);
    }
    std::vector<double> grad(m);
    for (std::size_t d = 0; d < m; ++d) {
        std::vector<std::vector<double>> v = phi;
        v[d] = basis_vector(cluster_.orders[d], angles[d], &basis_derivative);
        grad[d] = contract_all(coeffs_, dims, v);
    }
    return grad;
}

Eigen::MatrixXd TomographyModel::hessian(std::span<const double> angles) const {
    const std::size_t m = cluster_.size();
    if (angles.size() != m) {
        throw InvalidInputError("model hessian: angle count mismatch");
    }
    const std::vector<int> dims = dims_of(cluster_);
    std::vector<std::vector<double>> phi(m);
    for (std::size_t d = 0; d < m; ++d) {
        phi[d] = basis_vector(cluster_.orders[d], angles[d], &basis_function);
    }
    Eigen::MatrixXd h(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            std::vector<std::vector<double>> v = phi;
            if (a == b) {
                v[a] = basis_vector(cluster_.orders[a], angles[a],
                                    &basis_second_derivative);
            } else {
                v[a] = basis_vector(cluster_.orders[a], angles[a], &basis_derivative);
                v[b] = basis_vector(cluster_.orders[b], angles[b], &basis_derivative);
            }
            h(a, b) = contract_all(coeffs_, dims, v);
            h(b, a) = h(a, b);
        }
    }
    return h;
}

std::vector<double> TomographyModel::axis_profile(int axis,
                                                  std::span<const double> angles) const {
    const std::size_t m = cluster_.size();
    if (angles.size() != m) {
        throw InvalidInputError("axis_profile: angle count mismatch");
    }
    if (axis < 0 || static_cast<std::size_t>(axis) >= m) {
        throw InvalidInputError("axis_profile: axis out of range");
    }
    const std::vector<int> dims = dims_of(cluster_);
    const int len = dims[axis];
    std::vector<std::vector<double>> phi(m);
    for (std::size_t d = 0; d < m; ++d) {
        phi[d] = basis_vector(cluster_.orders[d], angles[d], &basis_function);
    }
    std::vector<double> profile(len, 0.0);
    std::vector<std::size_t> digit(m, 0);
    for (std::size_t flat = 0; flat < coeffs_.size(); ++flat) {
        double prod = coeffs_[flat];
        if (prod != 0.0) {
            for (std::size_t d = 0; d < m; ++d) {
                if (static_cast<int>(d) != axis) prod *= phi[d][digit[d]];
            }
            profile[digit[axis]] += prod;
        }
        for (std::size_t d = m; d-- > 0;) {
            if (++digit[d] < static_cast<std::size_t>(dims[d])) break;
            digit[d] = 0;
        }
    }
    return profile;
}

TomographyModel fit_from_samples(const ClusterSpec& cluster,
                                 const std::vector<std::vector<double>>& grids,
                                 std::span<const double> samples,
                                 std::vector<double> frozen_params) {
    cluster.validate();
    if (grids.size() != cluster.size()) {
        throw InvalidInputError("fit_from_samples: grid count mismatch");
    }
    const std::vector<int> dims = dims_of(cluster);
    if (samples.size() != cluster.grid_size()) {
        throw InvalidInputError("fit_from_samples: sample count mismatch");
    }

    std::vector<double> coeffs(samples.begin(), samples.end());
    for (std::size_t d = 0; d < cluster.size(); ++d) {
        const TransferMatrix t = transfer_matrix_on_grid(cluster.orders[d], grids[d]);
        coeffs = apply_along_axis(t.inverse, coeffs, dims, static_cast<int>(d));
    }
    TomographyModel model(cluster, std::move(coeffs), std::move(frozen_params));

    // Interpolation check: the model must reproduce every sample.
    double max_abs = 1.0;
    for (double s : samples) max_abs = std::max(max_abs, std::abs(s));
    std::vector<std::size_t> digit(cluster.size(), 0);
    std::vector<double> point(cluster.size());
    for (std::size_t flat = 0; flat < samples.size(); ++flat) {
        for (std::size_t d = 0; d < cluster.size(); ++d) point[d] = grids[d][digit[d]];
        const double err = std::abs(model.eval(point) - samples[flat]);
        if (!(err <= 1e-10 * max_abs)) {
            throw InternalError("tomography fit does not interpolate its samples: "
                                "error " + std::to_string(err));
        }
        for (std::size_t d = cluster.size(); d-- > 0;) {
            if (++digit[d] < static_cast<std::size_t>(dims[d])) break;
            digit[d] = 0;
        }
    }
    return model;
}

TomographyModel fit_cluster_on_grids(Objective& objective,
                                     std::span<const double> params,
                                     const ClusterSpec& cluster,
                                     const std::vector<std::vector<double>>& grids,
                                     std::size_t max_grid) {
    cluster.validate();
    if (static_cast<int>(params.size()) != objective.circuit().n_params()) {
        throw InvalidInputError("fit_cluster: parameter length mismatch");
    }
    for (int d : cluster.param_indices) {
        if (d >= objective.circuit().n_params()) {
            throw InvalidInputError("fit_cluster: cluster index out of range");
        }
    }
    const std::size_t total = cluster.grid_size();
    if (total > max_grid) {
        throw ResourceLimitError("fit_cluster: grid of " + std::to_string(total) +
                                 " points exceeds cap " + std::to_string(max_grid));
    }
    if (grids.size() != cluster.size()) {
        throw InvalidInputError("fit_cluster: grid count mismatch");
    }
    const std::vector<int> dims = dims_of(cluster);
    for (std::size_t d = 0; d < cluster.size(); ++d) {
        if (grids[d].size() != static_cast<std::size_t>(dims[d])) {
            throw InvalidInputError("fit_cluster: axis grid needs 2G+1 angles");
        }
    }

    std::vector<double> work(params.begin(), params.end());
    std::vector<double> samples(total);
    std::vector<std::size_t> digit(cluster.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t d = 0; d < cluster.size(); ++d) {
            work[cluster.param_indices[d]] = grids[d][digit[d]];
        }
        samples[flat] = objective.evaluate(work);
        for (std::size_t d = cluster.size(); d-- > 0;) {
            if (++digit[d] < static_cast<std::size_t>(dims[d])) break;
            digit[d] = 0;
        }
    }
    return fit_from_samples(cluster, grids, samples,
                            std::vector<double>(params.begin(), params.end()));
}

TomographyModel fit_cluster(Objective& objective, std::span<const double> params,
                            const ClusterSpec& cluster, std::size_t max_grid) {
    std::vector<std::vector<double>> grids;
    grids.reserve(cluster.size());
    for (int g : cluster.orders) grids.push_back(fourier_grid(g));
    return fit_cluster_on_grids(objective, params, cluster, grids, max_grid);
}

std::optional<double> analytic_theta_star(double beta, double gamma) {
    if (std::abs(beta) < 1e-14 && std::abs(gamma) < 1e-14) {
        return std::nullopt;
    }
    return wrap_half(0.5 * std::atan2(-gamma, -beta));
}

std::vector<double> optimize_model(const TomographyModel& model,
                                   std::span<const double> seed_angles) {
    const ClusterSpec& cluster = model.cluster();
    const std::size_t m = cluster.size();
    if (seed_angles.size() != m) {
        throw InvalidInputError("optimize_model: angle count mismatch");
    }

    // Stage 1: pi/8 rectilinear grid scan, seed point included. Ties keep
    // the earlier (lexicographically smaller) candidate.
    std::vector<double> best(seed_angles.begin(), seed_angles.end());
    for (double& t : best) t = wrap_half(t);
    double best_value = model.eval(best);

    std::vector<int> digit(m, 0);
    std::vector<double> point(m);
    const int per_axis = 8;
    bool done = false;
    while (!done) {
        for (std::size_t d = 0; d < m; ++d) {
            point[d] = -pi / 2.0 + digit[d] * (pi / per_axis);
        }
        const double v = model.eval(point);
        if (v < best_value) {
            best_value = v;
            best = point;
        }
        done = true;
        for (std::size_t d = m; d-- > 0;) {
            if (++digit[d] < per_axis) {
                done = false;
                break;
            }
            digit[d] = 0;
        }
    }

    // Stage 2: coordinate-wise updates to a fixed point.
    for (int sweep = 0; sweep < 200; ++sweep) {
        double max_change = 0.0;
        for (std::size_t axis = 0; axis < m; ++axis) {
            const std::vector<double> profile =
                model.axis_profile(static_cast<int>(axis), best);
            const int order = cluster.orders[axis];
            auto axis_value = [&](double t) {
                double acc = 0.0;
                for (int i = -order; i <= order; ++i) {
                    acc += profile[i + order] * basis_function(i, t);
                }
                return acc;
            };
            const double old_angle = best[axis];
            const double old_value = axis_value(old_angle);
            const double new_angle = minimize_axis_profile(profile, order, old_angle);
            const double new_value = axis_value(new_angle);
            if (new_value > old_value + 1e-12) {
                throw InternalError("optimize_model: coordinate update increased "
                                    "the model value");
            }
            if (new_value <= old_value) {
                best[axis] = new_angle;
                best_value = new_value;
                max_change = std::max(max_change,
                                      std::abs(wrap_half(new_angle - old_angle)));
            }
        }
        if (max_change < 1e-13) break;
    }
    best_value = model.eval(best);

    // Stage 3: Newton polish while the Hessian is positive definite.
    for (int it = 0; it < 60; ++it) {
        const std::vector<double> grad = model.gradient(best);
        const Eigen::MatrixXd hess = model.hessian(best);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
        if (eig.eigenvalues().minCoeff() <= 1e-10) break;
        Eigen::VectorXd g(m);
        for (std::size_t d = 0; d < m; ++d) g(d) = grad[d];
        const Eigen::VectorXd step = hess.ldlt().solve(-g);
        std::vector<double> cand = best;
        for (std::size_t d = 0; d < m; ++d) cand[d] += step(d);
        const double cand_value = model.eval(cand);
        if (cand_value > best_value) break;
        best = cand;
        best_value = cand_value;
        if (step.cwiseAbs().maxCoeff() < 1e-13) break;
    }

    return best;
}

std::vector<double> gradient_via_tomography(Objective& objective,
                                            std::span<const double> params) {
    const ParamCircuit& circuit = objective.circuit();
    if (static_cast<int>(params.size()) != circuit.n_params()) {
        throw InvalidInputError("gradient_via_tomography: parameter length mismatch");
    }
    std::vector<double> grad(params.size());
    for (int d = 0; d < circuit.n_params(); ++d) {
        const ClusterSpec cluster = make_cluster(circuit, {d});
        const TomographyModel model = fit_cluster(objective, params, cluster);
        const double angle[1] = {params[d]};
        grad[d] = model.gradient(angle)[0];
    }
    return grad;
}

} // namespace vqopt
