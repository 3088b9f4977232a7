#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vqopt/errors.hpp"
#include "vqopt/objective.hpp"
#include "vqopt/problems.hpp"

using namespace vqopt;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("ry rotates |0> into cos/sin superposition") {
    StateVector s(1);
    apply_ry(s, 0, pi / 4.0);
    CHECK(s[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s[0].imag() == doctest::Approx(0.0));
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ry at zero angle is the identity") {
    StateVector s(2);
    apply_ry(s, 0, 0.7);
    StateVector before = s;
    apply_ry(s, 1, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(s[i] - before[i]) < 1e-15);
    }
}

TEST_CASE("cnot truth table under msb ordering") {
    // |10>: qubit 0 set -> index 2
    StateVector s = StateVector::basis_state(2, 2);
    apply_cnot(s, 0, 1);
    CHECK(std::abs(s[3] - complex{1.0, 0.0}) < 1e-15); // |11>
    apply_cnot(s, 0, 1);
    CHECK(std::abs(s[2] - complex{1.0, 0.0}) < 1e-15); // back to |10>
}

TEST_CASE("bell circuit from ry and cnot") {
    ParamCircuit circuit(2, 1);
    circuit.add(Gate::ry(0, 0));
    circuit.add(Gate::cnot(0, 1));
    const double params[1] = {pi / 4.0};
    const StateVector out = simulate(circuit, params);
    CHECK(out[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(out[3].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(out[1]) < 1e-15);
    CHECK(std::abs(out[2]) < 1e-15);
}

TEST_CASE("empty circuit is the identity") {
    ParamCircuit circuit(2, 0);
    const StateVector out = simulate(circuit, {});
    CHECK(std::abs(out[0] - complex{1.0, 0.0}) < 1e-15);
}

TEST_CASE("entangler at zero angles maps |0000> to |0000>") {
    const ParamCircuit circuit = build_entangler_circuit(4, 4);
    const std::vector<double> params(circuit.n_params(), 0.0);
    const StateVector out = simulate(circuit, params);
    CHECK(std::abs(out[0] - complex{1.0, 0.0}) < 1e-14);
}

TEST_CASE("simulate rejects wrong parameter count") {
    ParamCircuit circuit(1, 1);
    circuit.add(Gate::ry(0, 0));
    const std::vector<double> params;
    CHECK_THROWS_AS(simulate(circuit, params), InvalidInputError);
}

TEST_CASE("gate constructors validate indices and unitarity") {
    CHECK_THROWS_AS(Gate::cnot(1, 1), InvalidInputError);
    CHECK_THROWS_AS(Gate::ry(-1, 0), InvalidInputError);
    std::vector<complex> not_unitary(4, complex{1.0, 0.0});
    CHECK_THROWS_AS(Gate::fixed_unitary({0}, not_unitary), InvalidInputError);
    ParamCircuit circuit(2, 1);
    CHECK_THROWS_AS(circuit.add(Gate::ry(0, 5)), InvalidInputError);
    CHECK_THROWS_AS(circuit.add(Gate::ry(1, 0)), InvalidInputError);
}

TEST_CASE("expectation basics") {
    PauliSum z(1);
    z.add_term(1.0, "Z");
    CHECK(expectation(StateVector(1), z) == doctest::Approx(1.0));

    StateVector rotated(1);
    apply_ry(rotated, 0, pi / 4.0);
    CHECK(expectation(rotated, z) == doctest::Approx(0.0).epsilon(1e-14));

    PauliSum zz(2);
    zz.add_term(1.0, "ZZ");
    StateVector bell(2);
    apply_ry(bell, 0, pi / 4.0);
    apply_cnot(bell, 0, 1);
    CHECK(expectation(bell, zz) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("single ry against z gives cos(2 theta)") {
    ParamCircuit circuit(1, 1);
    circuit.add(Gate::ry(0, 0));
    PauliSum z(1);
    z.add_term(1.0, "Z");
    Objective obj(std::move(circuit), std::move(z), {StateVector(1)});
    for (double theta : {-1.2, -0.3, 0.0, 0.4, 1.0, 1.5}) {
        const double params[1] = {theta};
        CHECK(obj.evaluate(params) ==
              doctest::Approx(std::cos(2.0 * theta)).epsilon(1e-13));
    }
}

TEST_CASE("expectation agrees with the dense matrix oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 3;
        const ParamCircuit circuit = oracles::random_circuit(n, 5, rng);
        const PauliSum h = oracles::random_pauli_sum(n, 6, rng);
        std::vector<double> params(5);
        for (double& p : params) p = oracles::uniform(rng, -pi / 2.0, pi / 2.0);
        const StateVector out = simulate(circuit, params);
        const double fast = expectation(out, h);
        const double dense = oracles::dense_expectation(out, oracles::dense_hamiltonian(h));
        CHECK(fast == doctest::Approx(dense).epsilon(1e-12));
    }
}

TEST_CASE("objective averages reference states and counts evaluations") {
    {
        ParamCircuit circuit = build_entangler_circuit(4, 4);
        PauliSum h(4);
        h.add_term(1.0, "ZIII");
        Objective obj = Objective::from_basis_references(std::move(circuit),
                                                         std::move(h), {0});
        const std::vector<double> zeros(16, 0.0);
        CHECK(obj.evaluate(zeros) == doctest::Approx(1.0));
        CHECK(obj.evals() == 1);
    }
    {
        // references |0000> and |1000> (qubit 0 flipped -> index 8)
        ParamCircuit circuit = build_entangler_circuit(4, 4);
        PauliSum h(4);
        h.add_term(1.0, "ZIII");
        Objective obj = Objective::from_basis_references(std::move(circuit),
                                                         std::move(h), {0, 8});
        const std::vector<double> zeros(16, 0.0);
        CHECK(obj.evaluate(zeros) == doctest::Approx(0.0));
    }
}

TEST_CASE("tfim objective at zero entanglement matches the product state oracle") {
    ProblemSpec spec;
    spec.hamiltonian = TfimParams{1.0, 1.0};
    spec.n_qubits = 4;
    spec.entangler_layers = 4;
    spec.n_references = 1;
    Objective obj = build_objective(spec);
    const std::vector<double> zeros(16, 0.0);
    const double value = obj.evaluate(zeros);
    const double dense = oracles::dense_expectation(
        StateVector(4), oracles::dense_hamiltonian(build_hamiltonian(spec)));
    CHECK(value == doctest::Approx(dense).epsilon(1e-13));
    // |0000> is a ZZ eigenstate with <X> = 0, so the value is 3*J
    CHECK(value == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("norm is preserved through random circuits") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const ParamCircuit circuit = oracles::random_circuit(4, 6, rng);
        std::vector<double> params(6);
        for (double& p : params) p = oracles::uniform(rng, -2.0, 2.0);
        const StateVector out = simulate(circuit, params);
        CHECK(std::abs(out.norm_sq() - 1.0) < 1e-12);
    }
}

TEST_CASE("objective is pi periodic in any multiplicity-1 parameter") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const ParamCircuit circuit = oracles::random_circuit(3, 4, rng);
        PauliSum h = oracles::random_pauli_sum(3, 4, rng);
        Objective obj(circuit, h, {StateVector(3)});
        std::vector<double> params(4);
        for (double& p : params) p = oracles::uniform(rng, -1.5, 1.5);
        const double base = obj.evaluate(params);
        for (int d = 0; d < 4; ++d) {
            std::vector<double> shifted = params;
            shifted[d] += pi;
            CHECK(obj.evaluate(shifted) == doctest::Approx(base).epsilon(1e-12));
        }
    }
}

TEST_CASE("fourier gradient formula") {
    ParamCircuit circuit(1, 1);
    circuit.add(Gate::ry(0, 0));
    PauliSum z(1);
    z.add_term(1.0, "Z");
    Objective obj(std::move(circuit), std::move(z), {StateVector(1)});

    const double at_zero[1] = {0.0};
    CHECK(gradient_fourier(obj, at_zero)[0] == doctest::Approx(0.0).epsilon(1e-14));

    const double at_eighth[1] = {pi / 8.0};
    CHECK(gradient_fourier(obj, at_eighth)[0] ==
          doctest::Approx(-std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("fourier gradient consumes exactly 2P evaluations") {
    ProblemSpec spec;
    spec.n_qubits = 4;
    spec.entangler_layers = 4;
    Objective obj = build_objective(spec);
    const std::vector<double> zeros(16, 0.0);
    const long long before = obj.evals();
    gradient_fourier(obj, zeros);
    CHECK(obj.evals() - before == 32);
}

TEST_CASE("fourier gradient rejects pinned parameters") {
    ParamCircuit circuit(2, 1);
    circuit.add(Gate::ry(0, 0));
    circuit.add(Gate::ry(0, 1)); // same parameter on both wires
    PauliSum z(2);
    z.add_term(1.0, "ZI");
    Objective obj(std::move(circuit), std::move(z), {StateVector(2)});
    const double params[1] = {0.3};
    CHECK_THROWS_AS(gradient_fourier(obj, params), UnsupportedShapeError);
}

TEST_CASE("fourier gradient matches central finite differences") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 4; ++trial) {
        const ParamCircuit circuit = oracles::random_circuit(3, 5, rng);
        PauliSum h = oracles::random_pauli_sum(3, 5, rng);
        Objective obj(circuit, h, {StateVector(3)});
        std::vector<double> params(5);
        for (double& p : params) p = oracles::uniform(rng, -1.5, 1.5);
        const std::vector<double> g = gradient_fourier(obj, params);
        const std::vector<double> fd =
            oracles::finite_difference_gradient(obj, params, 1e-5);
        for (std::size_t d = 0; d < g.size(); ++d) {
            CHECK(std::abs(g[d] - fd[d]) < 1e-7);
        }
    }
}

TEST_CASE("fixed unitary embedding matches dense conjugation") {
    std::mt19937_64 rng(17);
    // random 2-qubit unitary on qubits {2, 0} of a 3-qubit state, checked
    // against the full 8x8 matrix built with the oracle's kron ordering
    const int n = 3;
    Eigen::MatrixXcd a(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            a(r, c) = complex{oracles::uniform(rng, -1.0, 1.0),
                              oracles::uniform(rng, -1.0, 1.0)};
        }
    }
    const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
    std::vector<complex> u(16);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) u[r * 4 + c] = q(r, c);
    }

    StateVector state(n);
    apply_ry(state, 0, 0.3);
    apply_ry(state, 1, -0.8);
    apply_ry(state, 2, 1.1);
    apply_cnot(state, 0, 2);
    StateVector fast = state;
    const int qubits[2] = {2, 0};
    apply_unitary(fast, qubits, u);

    // dense embedding: local index bit 1 (msb) = qubit 2, bit 0 = qubit 0
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(8, 8);
    for (int row = 0; row < 8; ++row) {
        for (int col = 0; col < 8; ++col) {
            auto bit = [](int idx, int pos) { return (idx >> pos) & 1; };
            // global bit positions: qubit 0 -> 2, qubit 1 -> 1, qubit 2 -> 0
            if (bit(row, 1) != bit(col, 1)) continue; // qubit 1 untouched
            const int lr = bit(row, 0) * 2 + bit(row, 2);
            const int lc = bit(col, 0) * 2 + bit(col, 2);
            full(row, col) = u[lr * 4 + lc];
        }
    }
    Eigen::VectorXcd psi(8);
    for (int i = 0; i < 8; ++i) psi(i) = state[i];
    const Eigen::VectorXcd expected = full * psi;
    for (int i = 0; i < 8; ++i) {
        CHECK(std::abs(fast[i] - expected(i)) < 1e-12);
    }
}
