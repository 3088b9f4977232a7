#pragma once

#include <span>
#include <vector>

#include "vqopt/statevector.hpp"

namespace vqopt {

/// One circuit element. Ry gates are the only parameter entry points; their
/// param_index may be shared across gates (QAOA-style pinning). FixedUnitary
/// holds a dense row-major matrix over at most 4 qubits and is checked for
/// unitarity (1e-12) on construction.
struct Gate {
    enum class Kind { Ry, Cnot, FixedUnitary };

    Kind kind = Kind::Ry;
    int param_index = -1;          // Ry
    int qubit = -1;                // Ry
    int control = -1, target = -1; // Cnot
    std::vector<int> qubits;       // FixedUnitary
    std::vector<complex> matrix;   // FixedUnitary, row-major 2^k x 2^k

    static Gate ry(int param_index, int qubit);
    static Gate cnot(int control, int target);
    static Gate fixed_unitary(std::vector<int> qubits, std::vector<complex> matrix);
};

/// Gate list with shared-parameter bindings. multiplicity(d) is the number
/// of Ry gates bound to parameter d (the pinning order of that parameter).
class ParamCircuit {
public:
    ParamCircuit(int n_qubits, int n_params);

    void add(Gate gate);

    int n_qubits() const { return n_qubits_; }
    int n_params() const { return n_params_; }
    const std::vector<Gate>& gates() const { return gates_; }

    int multiplicity(int param_index) const;
    int max_multiplicity() const;

    /// Qubit wires of the Ry gates bound to a parameter (sorted, deduplicated).
    std::vector<int> param_wires(int param_index) const;

    /// Throws unless every parameter in [0, n_params) is bound by >= 1 gate.
    void validate() const;

private:
    int n_qubits_;
    int n_params_;
    std::vector<Gate> gates_;
    std::vector<int> multiplicity_;
};

void apply_gate(StateVector& state, const Gate& gate, std::span<const double> params);

/// Value-returning form: the transformed (still normalized) state.
StateVector apply_gate(const StateVector& state, const Gate& gate,
                       std::span<const double> params);

StateVector simulate(const ParamCircuit& circuit, std::span<const double> params,
                     const StateVector& initial);

/// From |0...0>.
StateVector simulate(const ParamCircuit& circuit, std::span<const double> params);

} // namespace vqopt
