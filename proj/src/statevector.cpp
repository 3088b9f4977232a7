#include "vqopt/statevector.hpp"

#include <cmath>
#include <string>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

void check_qubit(const StateVector& state, int qubit, const char* what) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw InvalidInputError(std::string(what) + ": qubit index " +
                                std::to_string(qubit) + " out of range for " +
                                std::to_string(state.n_qubits()) + " qubits");
    }
}

} // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 20) {
        throw InvalidInputError("StateVector: n_qubits must be in [1, 20], got " +
                                std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.size()) {
        throw InvalidInputError("basis_state: index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm_sq() const {
    double acc = 0.0;
    for (const complex& a : amps_) acc += std::norm(a);
    return acc;
}

complex StateVector::inner(const StateVector& other) const {
    if (other.size() != size()) {
        throw InvalidInputError("inner: dimension mismatch");
    }
    complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        acc += std::conj(amps_[i]) * other.amps_[i];
    }
    return acc;
}

void apply_ry(StateVector& state, int qubit, double theta) {
    check_qubit(state, qubit, "apply_ry");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    auto amps = state.amplitudes();
    const std::size_t n = amps.size();
    const std::size_t stride = n >> (qubit + 1); // qubit 0 = MSB
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const complex a0 = amps[i];
            const complex a1 = amps[i + stride];
            amps[i] = c * a0 - s * a1;
            amps[i + stride] = s * a0 + c * a1;
        }
    }
}

void apply_cnot(StateVector& state, int control, int target) {
    check_qubit(state, control, "apply_cnot");
    check_qubit(state, target, "apply_cnot");
    if (control == target) {
        throw InvalidInputError("apply_cnot: control equals target");
    }
    auto amps = state.amplitudes();
    const std::size_t n = amps.size();
    const std::size_t cbit = n >> (control + 1);
    const std::size_t tbit = n >> (target + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

void apply_unitary(StateVector& state, std::span<const int> qubits,
                   std::span<const complex> matrix) {
    const int k = static_cast<int>(qubits.size());
    if (k < 1 || k > 4) {
        throw InvalidInputError("apply_unitary: supports 1 to 4 qubits");
    }
    const std::size_t dim = std::size_t{1} << k;
    if (matrix.size() != dim * dim) {
        throw InvalidInputError("apply_unitary: matrix dimension mismatch");
    }
    for (int j = 0; j < k; ++j) {
        check_qubit(state, qubits[j], "apply_unitary");
        for (int l = 0; l < j; ++l) {
            if (qubits[l] == qubits[j]) {
                throw InvalidInputError("apply_unitary: duplicate qubit index");
            }
        }
    }

    auto amps = state.amplitudes();
    const std::size_t n = amps.size();
    // offsets[l] = global-index bits for local index l (qubits[0] local MSB)
    std::vector<std::size_t> offsets(dim, 0);
    std::size_t mask = 0;
    for (int j = 0; j < k; ++j) {
        const std::size_t bit = n >> (qubits[j] + 1);
        mask |= bit;
        for (std::size_t l = 0; l < dim; ++l) {
            if ((l >> (k - 1 - j)) & 1u) offsets[l] |= bit;
        }
    }

    std::vector<complex> local(dim), out(dim);
    for (std::size_t rep = 0; rep < n; ++rep) {
        if (rep & mask) continue;
        for (std::size_t l = 0; l < dim; ++l) local[l] = amps[rep | offsets[l]];
        for (std::size_t r = 0; r < dim; ++r) {
            complex acc{0.0, 0.0};
            const complex* row = matrix.data() + r * dim;
            for (std::size_t l = 0; l < dim; ++l) acc += row[l] * local[l];
            out[r] = acc;
        }
        for (std::size_t l = 0; l < dim; ++l) amps[rep | offsets[l]] = out[l];
    }
}

} // namespace vqopt
