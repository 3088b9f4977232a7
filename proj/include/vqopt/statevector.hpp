#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace vqopt {

using complex = std::complex<double>;

/// Dense noiseless statevector over n qubits.
///
/// Bit convention: qubit 0 is the MOST significant bit of the basis index,
/// so for n=2 the amplitudes are ordered |00>, |01>, |10>, |11> with the
/// first bit belonging to qubit 0. All gate kernels and embeddings in this
/// library assume this ordering.
class StateVector {
public:
    explicit StateVector(int n_qubits);

    /// Computational basis state |index> (index interpreted per the bit
    /// convention above).
    static StateVector basis_state(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return amps_.size(); }

    std::span<const complex> amplitudes() const { return amps_; }
    std::span<complex> amplitudes() { return amps_; }

    complex& operator[](std::size_t i) { return amps_[i]; }
    const complex& operator[](std::size_t i) const { return amps_[i]; }

    double norm_sq() const;

    /// <this|other>
    complex inner(const StateVector& other) const;

private:
    int n_qubits_;
    std::vector<complex> amps_;
};

/// R_y(theta) = exp(-i theta Y): acts as [[cos t, -sin t], [sin t, cos t]]
/// on the target qubit. Note the theta-angle (not theta/2) exponent: the
/// induced expectation values have period pi (cos 2theta behaviour), which
/// every quadrature grid and tomography formula here relies on. Most
/// simulators use the half-angle convention; this one deliberately does not.
void apply_ry(StateVector& state, int qubit, double theta);

void apply_cnot(StateVector& state, int control, int target);

/// Applies a dense unitary on the listed qubits (at most 4). qubits[0] is
/// the most significant bit of the local matrix index, matching the global
/// bit convention. The matrix is row-major with dimension 2^k.
void apply_unitary(StateVector& state, std::span<const int> qubits,
                   std::span<const complex> matrix);

} // namespace vqopt
