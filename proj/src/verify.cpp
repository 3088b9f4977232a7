#include "vqopt/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "vqopt/errors.hpp"
#include "vqopt/tomography.hpp"

namespace vqopt {

namespace {

constexpr double pi = std::numbers::pi;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) / static_cast<double>(1ull << 53);
}

/// Haar-ish random unitary from the QR of a complex Gaussian matrix.
std::vector<complex> random_unitary(int n_target_qubits, std::mt19937_64& rng) {
    const int dim = 1 << n_target_qubits;
    Eigen::MatrixXcd a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            // Box-Muller from explicit uniform draws
            const double u1 = std::max(uniform01(rng), 1e-300);
            const double u2 = uniform01(rng);
            const double mag = std::sqrt(-2.0 * std::log(u1));
            a(r, c) = complex{mag * std::cos(2.0 * pi * u2),
                              mag * std::sin(2.0 * pi * u2)};
        }
    }
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < dim; ++c) {
        const complex d = r(c, c);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(c) *= d / mag;
    }
    std::vector<complex> out(static_cast<std::size_t>(dim) * dim);
    for (int rr = 0; rr < dim; ++rr) {
        for (int cc = 0; cc < dim; ++cc) out[rr * dim + cc] = q(rr, cc);
    }
    return out;
}

PauliSum random_observable(int n_qubits, int n_terms, std::mt19937_64& rng) {
    PauliSum h(n_qubits);
    constexpr char letters[4] = {'I', 'X', 'Y', 'Z'};
    for (int t = 0; t < n_terms; ++t) {
        std::string ops(n_qubits, 'I');
        bool identity = true;
        while (identity) {
            for (int q = 0; q < n_qubits; ++q) {
                ops[q] = letters[rng() % 4];
                if (ops[q] != 'I') identity = false;
            }
        }
        h.add_term(2.0 * uniform01(rng) - 1.0, ops);
    }
    return h;
}

int dense_points_per_axis(std::size_t m) {
    switch (m) {
        case 1: return 64;
        case 2: return 24;
        case 3: return 10;
        case 4: return 7;
        default: return 6;
    }
}

} // namespace

Objective make_random_tomography_objective(std::span<const int> orders, int n_qubits,
                                           std::mt19937_64& rng) {
    const int m = static_cast<int>(orders.size());
    if (m < 1) throw InvalidInputError("make_random_tomography_objective: no axes");

    // One slot per pinned gate, shuffled so the pinning interleaves.
    std::vector<int> slots;
    for (int d = 0; d < m; ++d) {
        for (int g = 0; g < orders[d]; ++g) slots.push_back(d);
    }
    for (std::size_t i = slots.size(); i > 1; --i) {
        std::swap(slots[i - 1], slots[rng() % i]);
    }

    ParamCircuit circuit(n_qubits, m);
    const int u_qubits = std::min(n_qubits, 2);
    auto add_random_unitary = [&] {
        std::vector<int> qubits(n_qubits);
        for (int q = 0; q < n_qubits; ++q) qubits[q] = q;
        for (std::size_t i = qubits.size(); i > 1; --i) {
            std::swap(qubits[i - 1], qubits[rng() % i]);
        }
        qubits.resize(u_qubits);
        circuit.add(Gate::fixed_unitary(qubits, random_unitary(u_qubits, rng)));
    };

    add_random_unitary();
    for (int d : slots) {
        circuit.add(Gate::ry(d, static_cast<int>(rng() % n_qubits)));
        add_random_unitary();
    }
    circuit.validate();

    PauliSum h = random_observable(n_qubits, 5, rng);
    return Objective(std::move(circuit), std::move(h),
                     {StateVector(n_qubits)});
}

VerificationReport verify_tomography(int max_m, int max_g, std::uint64_t seed) {
    if (max_m < 1 || max_g < 1) {
        throw InvalidInputError("verify_tomography: max_m and max_g must be >= 1");
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(seed);
    VerificationReport report;

    std::vector<std::vector<int>> shapes;
    for (int m = 1; m <= max_m; ++m) {
        shapes.emplace_back(m, 1); // plain VQE cluster
        if (max_g > 1) {
            std::vector<int> pinned_one(m, 1);
            pinned_one[0] = max_g;
            shapes.push_back(std::move(pinned_one)); // one pinned axis
            if (m <= 2) {
                shapes.emplace_back(m, max_g); // fully pinned (QAOA-style)
            }
        }
    }

    for (const auto& orders : shapes) {
        const int n_qubits = 3;
        Objective obj = make_random_tomography_objective(orders, n_qubits, rng);

        ClusterSpec cluster;
        for (int d = 0; d < static_cast<int>(orders.size()); ++d) {
            cluster.param_indices.push_back(d);
        }
        cluster.orders = orders;

        std::vector<double> params(orders.size());
        for (double& p : params) p = pi * (uniform01(rng) - 0.5);

        const TomographyModel model =
            fit_cluster(obj, params, cluster, /*max_grid=*/1 << 14);

        const std::size_t m = orders.size();
        const int per_axis = dense_points_per_axis(m);
        std::vector<double> work = params;
        std::vector<double> angles(m);
        std::vector<int> digit(m, 0);
        double max_err = 0.0;
        double scale = 0.0;
        bool done = false;
        while (!done) {
            for (std::size_t d = 0; d < m; ++d) {
                angles[d] = -pi / 2.0 + digit[d] * (pi / per_axis);
                work[cluster.param_indices[d]] = angles[d];
            }
            const double direct = obj.evaluate(work);
            const double fitted = model.eval(angles);
            max_err = std::max(max_err, std::abs(direct - fitted));
            scale = std::max(scale, std::abs(direct));
            done = true;
            for (std::size_t d = m; d-- > 0;) {
                if (++digit[d] < per_axis) {
                    done = false;
                    break;
                }
                digit[d] = 0;
            }
        }

        VerificationCase vc;
        vc.orders = orders;
        vc.quadrature_points = cluster.grid_size();
        vc.max_relative_deviation = max_err / std::max(scale, 1e-300);
        report.max_relative_deviation =
            std::max(report.max_relative_deviation, vc.max_relative_deviation);
        report.cases.push_back(std::move(vc));
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace vqopt
