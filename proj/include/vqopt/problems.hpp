#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "vqopt/objective.hpp"

namespace vqopt {

/// Nearest-neighbor open chain: H = J sum Z_i Z_{i+1} + h sum X_i.
struct TfimParams {
    double coupling = 1.0; // J
    double field = 1.0;    // h
};

/// Open chain: H = sum_i Jx X_i X_{i+1} + Jy Y_i Y_{i+1} + Jz Z_i Z_{i+1}.
struct HeisenbergParams {
    double jx = 1.0;
    double jy = 1.0;
    double jz = 1.0;
};

/// n_terms random non-identity Pauli strings with coefficients in [-1, 1],
/// drawn deterministically from the seed.
struct RandomPauliParams {
    int n_terms = 8;
    std::uint64_t seed = 0;
};

using HamiltonianSpec = std::variant<TfimParams, HeisenbergParams, RandomPauliParams>;

struct ProblemSpec {
    HamiltonianSpec hamiltonian = TfimParams{};
    int n_qubits = 4;
    int entangler_layers = 4;
    int n_references = 1;
    std::vector<double> initial_params; // empty = all zeros
};

/// Hardware-efficient Ry/CNOT entangler. One initial Ry column over all
/// qubits, then per layer: a CNOT ladder followed by an Ry column on the
/// qubits that ladder touches. Ladder parity repeats the 4-qubit reference
/// pattern (even, even, odd, odd); parameter indices run qubit-fast,
/// time-slow. (4 qubits, 4 layers) gives the 16-angle, 6-CNOT layout;
/// (2 qubits, 1 layer) gives 2 Ry columns around a single CNOT.
ParamCircuit build_entangler_circuit(int n_qubits, int n_layers);

PauliSum build_hamiltonian(const ProblemSpec& spec);

/// Objective with the n_references lowest-index computational basis states
/// as references.
Objective build_objective(const ProblemSpec& spec);

/// Zeros unless the spec provides explicit initial parameters.
std::vector<double> initial_parameters(const ProblemSpec& spec);

} // namespace vqopt
