#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vqopt/statevector.hpp"

namespace vqopt {

/// One weighted Pauli string. ops has one letter per qubit (index = qubit),
/// each in {I, X, Y, Z}. Coefficients are real by construction, which keeps
/// the operator Hermitian.
struct PauliTerm {
    double coefficient = 0.0;
    std::string ops;
};

class PauliSum {
public:
    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

    /// Validates the letters and the string length against n_qubits.
    void add_term(double coefficient, std::string_view ops);

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliTerm>& terms() const { return terms_; }

private:
    int n_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

/// <psi| O |psi>. The result is real for real coefficients; any imaginary
/// residue must stay below 1e-12 (asserted) and is then discarded.
double expectation(const StateVector& state, const PauliSum& observable);

} // namespace vqopt
