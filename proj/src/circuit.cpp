#include "vqopt/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {

Gate Gate::ry(int param_index, int qubit) {
    if (param_index < 0) throw InvalidInputError("Gate::ry: negative param index");
    if (qubit < 0) throw InvalidInputError("Gate::ry: negative qubit index");
    Gate g;
    g.kind = Kind::Ry;
    g.param_index = param_index;
    g.qubit = qubit;
    return g;
}

Gate Gate::cnot(int control, int target) {
    if (control < 0 || target < 0 || control == target) {
        throw InvalidInputError("Gate::cnot: invalid control/target");
    }
    Gate g;
    g.kind = Kind::Cnot;
    g.control = control;
    g.target = target;
    return g;
}

Gate Gate::fixed_unitary(std::vector<int> qubits, std::vector<complex> matrix) {
    const int k = static_cast<int>(qubits.size());
    if (k < 1 || k > 4) {
        throw InvalidInputError("Gate::fixed_unitary: supports 1 to 4 qubits");
    }
    const std::size_t dim = std::size_t{1} << k;
    if (matrix.size() != dim * dim) {
        throw InvalidInputError("Gate::fixed_unitary: matrix size mismatch");
    }
    std::vector<int> sorted = qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidInputError("Gate::fixed_unitary: duplicate qubit index");
    }
    // U^dag U = I within 1e-12
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            complex acc{0.0, 0.0};
            for (std::size_t k2 = 0; k2 < dim; ++k2) {
                acc += std::conj(matrix[k2 * dim + r]) * matrix[k2 * dim + c];
            }
            const double expect = (r == c) ? 1.0 : 0.0;
            if (std::abs(acc - expect) > 1e-12) {
                throw InvalidInputError("Gate::fixed_unitary: matrix is not unitary");
            }
        }
    }
    Gate g;
    g.kind = Kind::FixedUnitary;
    g.qubits = std::move(qubits);
    g.matrix = std::move(matrix);
    return g;
}

ParamCircuit::ParamCircuit(int n_qubits, int n_params)
    : n_qubits_(n_qubits), n_params_(n_params), multiplicity_(n_params, 0) {
    if (n_qubits < 1) throw InvalidInputError("ParamCircuit: n_qubits must be >= 1");
    if (n_params < 0) throw InvalidInputError("ParamCircuit: n_params must be >= 0");
}

void ParamCircuit::add(Gate gate) {
    auto check = [this](int q, const char* what) {
        if (q < 0 || q >= n_qubits_) {
            throw InvalidInputError(std::string(what) + ": qubit index " +
                                    std::to_string(q) + " out of range");
        }
    };
    switch (gate.kind) {
        case Gate::Kind::Ry:
            check(gate.qubit, "ParamCircuit::add(Ry)");
            if (gate.param_index >= n_params_) {
                throw InvalidInputError("ParamCircuit::add(Ry): param index out of range");
            }
            ++multiplicity_[gate.param_index];
            break;
        case Gate::Kind::Cnot:
            check(gate.control, "ParamCircuit::add(Cnot)");
            check(gate.target, "ParamCircuit::add(Cnot)");
            break;
        case Gate::Kind::FixedUnitary:
            for (int q : gate.qubits) check(q, "ParamCircuit::add(FixedUnitary)");
            break;
    }
    gates_.push_back(std::move(gate));
}

int ParamCircuit::multiplicity(int param_index) const {
    if (param_index < 0 || param_index >= n_params_) {
        throw InvalidInputError("multiplicity: param index out of range");
    }
    return multiplicity_[param_index];
}

int ParamCircuit::max_multiplicity() const {
    int m = 0;
    for (int v : multiplicity_) m = std::max(m, v);
    return m;
}

std::vector<int> ParamCircuit::param_wires(int param_index) const {
    if (param_index < 0 || param_index >= n_params_) {
        throw InvalidInputError("param_wires: param index out of range");
    }
    std::vector<int> wires;
    for (const Gate& g : gates_) {
        if (g.kind == Gate::Kind::Ry && g.param_index == param_index) {
            wires.push_back(g.qubit);
        }
    }
    std::sort(wires.begin(), wires.end());
    wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
    return wires;
}

void ParamCircuit::validate() const {
    for (int d = 0; d < n_params_; ++d) {
        if (multiplicity_[d] == 0) {
            throw InvalidInputError("ParamCircuit: parameter " + std::to_string(d) +
                                    " is not bound by any gate");
        }
    }
}

void apply_gate(StateVector& state, const Gate& gate, std::span<const double> params) {
    switch (gate.kind) {
        case Gate::Kind::Ry:
            if (gate.param_index >= static_cast<int>(params.size())) {
                throw InvalidInputError("apply_gate: param index out of range");
            }
            apply_ry(state, gate.qubit, params[gate.param_index]);
            break;
        case Gate::Kind::Cnot:
            apply_cnot(state, gate.control, gate.target);
            break;
        case Gate::Kind::FixedUnitary:
            apply_unitary(state, gate.qubits, gate.matrix);
            break;
    }
}

StateVector apply_gate(const StateVector& state, const Gate& gate,
                       std::span<const double> params) {
    StateVector out = state;
    apply_gate(out, gate, params);
    return out;
}

StateVector simulate(const ParamCircuit& circuit, std::span<const double> params,
                     const StateVector& initial) {
    if (static_cast<int>(params.size()) != circuit.n_params()) {
        throw InvalidInputError("simulate: expected " +
                                std::to_string(circuit.n_params()) + " parameters, got " +
                                std::to_string(params.size()));
    }
    if (initial.n_qubits() != circuit.n_qubits()) {
        throw InvalidInputError("simulate: initial state qubit count mismatch");
    }
    StateVector state = initial;
    for (const Gate& g : circuit.gates()) {
        apply_gate(state, g, params);
    }
    return state;
}

StateVector simulate(const ParamCircuit& circuit, std::span<const double> params) {
    return simulate(circuit, params, StateVector(circuit.n_qubits()));
}

} // namespace vqopt
