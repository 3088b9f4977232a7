#include "vqopt/problems.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

std::vector<std::pair<int, int>> ladder_pairs(int n_qubits, int parity) {
    std::vector<std::pair<int, int>> pairs;
    for (int q = parity; q + 1 < n_qubits; q += 2) {
        pairs.emplace_back(q, q + 1);
    }
    return pairs;
}

} // namespace

ParamCircuit build_entangler_circuit(int n_qubits, int n_layers) {
    if (n_qubits < 2) {
        throw InvalidInputError("build_entangler_circuit: n_qubits must be >= 2");
    }
    if (n_layers < 0) {
        throw InvalidInputError("build_entangler_circuit: n_layers must be >= 0");
    }

    struct Column {
        std::vector<int> qubits;
    };
    struct Block {
        std::vector<std::pair<int, int>> cnots;
        Column column;
    };

    std::vector<Block> blocks;
    int n_params = n_qubits; // initial full column
    for (int l = 0; l < n_layers; ++l) {
        const int parity = ((l % 4) < 2) ? 0 : 1;
        auto pairs = ladder_pairs(n_qubits, parity);
        if (pairs.empty()) pairs = ladder_pairs(n_qubits, 1 - parity);
        Block block;
        block.cnots = pairs;
        for (const auto& [c, t] : pairs) {
            block.column.qubits.push_back(c);
            block.column.qubits.push_back(t);
        }
        std::sort(block.column.qubits.begin(), block.column.qubits.end());
        n_params += static_cast<int>(block.column.qubits.size());
        blocks.push_back(std::move(block));
    }

    ParamCircuit circuit(n_qubits, n_params);
    int param = 0;
    for (int q = 0; q < n_qubits; ++q) circuit.add(Gate::ry(param++, q));
    for (const Block& block : blocks) {
        for (const auto& [c, t] : block.cnots) circuit.add(Gate::cnot(c, t));
        for (int q : block.column.qubits) circuit.add(Gate::ry(param++, q));
    }
    circuit.validate();
    return circuit;
}

PauliSum build_hamiltonian(const ProblemSpec& spec) {
    const int n = spec.n_qubits;
    if (n < 1) throw InvalidInputError("build_hamiltonian: n_qubits must be >= 1");
    PauliSum h(n);

    if (const auto* tfim = std::get_if<TfimParams>(&spec.hamiltonian)) {
        for (int i = 0; i + 1 < n; ++i) {
            std::string ops(n, 'I');
            ops[i] = 'Z';
            ops[i + 1] = 'Z';
            h.add_term(tfim->coupling, ops);
        }
        if (tfim->field != 0.0) {
            for (int i = 0; i < n; ++i) {
                std::string ops(n, 'I');
                ops[i] = 'X';
                h.add_term(tfim->field, ops);
            }
        }
        return h;
    }

    if (const auto* xyz = std::get_if<HeisenbergParams>(&spec.hamiltonian)) {
        const std::pair<double, char> parts[3] = {
            {xyz->jx, 'X'}, {xyz->jy, 'Y'}, {xyz->jz, 'Z'}};
        for (int i = 0; i + 1 < n; ++i) {
            for (const auto& [coeff, letter] : parts) {
                if (coeff == 0.0) continue;
                std::string ops(n, 'I');
                ops[i] = letter;
                ops[i + 1] = letter;
                h.add_term(coeff, ops);
            }
        }
        return h;
    }

    const auto& random = std::get<RandomPauliParams>(spec.hamiltonian);
    if (random.n_terms < 1) {
        throw InvalidInputError("build_hamiltonian: n_terms must be >= 1");
    }
    std::mt19937_64 rng(random.seed);
    constexpr char letters[4] = {'I', 'X', 'Y', 'Z'};
    for (int t = 0; t < random.n_terms; ++t) {
        std::string ops(n, 'I');
        bool identity = true;
        while (identity) {
            for (int q = 0; q < n; ++q) {
                ops[q] = letters[rng() % 4];
                if (ops[q] != 'I') identity = false;
            }
        }
        // coefficient uniform in [-1, 1] from explicit 53-bit draws (keeps
        // the stream identical across standard libraries)
        const double u =
            static_cast<double>(rng() >> 11) / static_cast<double>(1ull << 53);
        h.add_term(2.0 * u - 1.0, ops);
    }
    return h;
}

Objective build_objective(const ProblemSpec& spec) {
    if (spec.n_references < 1) {
        throw InvalidInputError("build_objective: n_references must be >= 1");
    }
    const std::uint64_t dim = std::uint64_t{1} << spec.n_qubits;
    if (static_cast<std::uint64_t>(spec.n_references) > dim) {
        throw InvalidInputError("build_objective: n_references exceeds 2^n_qubits");
    }
    ParamCircuit circuit = build_entangler_circuit(spec.n_qubits, spec.entangler_layers);
    PauliSum h = build_hamiltonian(spec);
    std::vector<std::uint64_t> refs(spec.n_references);
    for (int i = 0; i < spec.n_references; ++i) refs[i] = static_cast<std::uint64_t>(i);
    return Objective::from_basis_references(std::move(circuit), std::move(h), refs);
}

std::vector<double> initial_parameters(const ProblemSpec& spec) {
    const ParamCircuit circuit =
        build_entangler_circuit(spec.n_qubits, spec.entangler_layers);
    if (spec.initial_params.empty()) {
        return std::vector<double>(circuit.n_params(), 0.0);
    }
    if (static_cast<int>(spec.initial_params.size()) != circuit.n_params()) {
        throw InvalidInputError("initial_parameters: expected " +
                                std::to_string(circuit.n_params()) + " values, got " +
                                std::to_string(spec.initial_params.size()));
    }
    return spec.initial_params;
}

} // namespace vqopt
