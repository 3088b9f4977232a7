#include "vqopt/pauli.hpp"

#include <bit>
#include <cmath>

#include "vqopt/errors.hpp"

namespace vqopt {

void PauliSum::add_term(double coefficient, std::string_view ops) {
    if (static_cast<int>(ops.size()) != n_qubits_) {
        throw InvalidInputError("PauliSum::add_term: string length " +
                                std::to_string(ops.size()) + " != n_qubits " +
                                std::to_string(n_qubits_));
    }
    for (char c : ops) {
        if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
            throw InvalidInputError(std::string("PauliSum::add_term: bad letter '") +
                                    c + "'");
        }
    }
    terms_.push_back(PauliTerm{coefficient, std::string(ops)});
}

double expectation(const StateVector& state, const PauliSum& observable) {
    if (observable.n_qubits() != state.n_qubits()) {
        throw InvalidInputError("expectation: qubit count mismatch");
    }
    const auto amps = state.amplitudes();
    const std::size_t n = amps.size();
    const int nq = state.n_qubits();

    complex total{0.0, 0.0};
    for (const PauliTerm& term : observable.terms()) {
        std::size_t flip_mask = 0; // X and Y flip the bit
        std::size_t sign_mask = 0; // Y and Z pick up (-1)^bit
        int n_y = 0;
        for (int q = 0; q < nq; ++q) {
            const std::size_t bit = n >> (q + 1);
            switch (term.ops[q]) {
                case 'X': flip_mask |= bit; break;
                case 'Y': flip_mask |= bit; sign_mask |= bit; ++n_y; break;
                case 'Z': sign_mask |= bit; break;
                default: break;
            }
        }
        // i^n_y from the Y factors on the source basis state
        static constexpr complex i_pow[4] = {
            {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        const complex y_factor = i_pow[n_y & 3];

        complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double sgn = (std::popcount(i & sign_mask) & 1) ? -1.0 : 1.0;
            acc += std::conj(amps[i ^ flip_mask]) * (sgn * amps[i]);
        }
        total += term.coefficient * y_factor * acc;
    }

    if (std::abs(total.imag()) >= 1e-12) {
        throw InternalError("expectation: imaginary residue " +
                            std::to_string(total.imag()) + " exceeds 1e-12");
    }
    return total.real();
}

} // namespace vqopt
