#include "vqopt/objective.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vqopt/errors.hpp"
#include "vqopt/tomography.hpp"

namespace vqopt {

Objective::Objective(ParamCircuit circuit, PauliSum observable,
                     std::vector<StateVector> references)
    : circuit_(std::move(circuit)),
      observable_(std::move(observable)),
      references_(std::move(references)) {
    circuit_.validate();
    if (observable_.n_qubits() != circuit_.n_qubits()) {
        throw InvalidInputError("Objective: observable qubit count mismatch");
    }
    if (references_.empty()) {
        throw InvalidInputError("Objective: at least one reference state required");
    }
    for (const StateVector& ref : references_) {
        if (ref.n_qubits() != circuit_.n_qubits()) {
            throw InvalidInputError("Objective: reference state qubit count mismatch");
        }
    }
}

Objective Objective::from_basis_references(ParamCircuit circuit, PauliSum observable,
                                           const std::vector<std::uint64_t>& indices) {
    std::vector<StateVector> refs;
    refs.reserve(indices.size());
    for (std::uint64_t idx : indices) {
        refs.push_back(StateVector::basis_state(circuit.n_qubits(), idx));
    }
    return Objective(std::move(circuit), std::move(observable), std::move(refs));
}

double Objective::value(std::span<const double> params) const {
    double acc = 0.0;
    for (const StateVector& ref : references_) {
        const StateVector out = simulate(circuit_, params, ref);
        acc += expectation(out, observable_);
    }
    return acc / static_cast<double>(references_.size());
}

std::vector<double> gradient_fourier(Objective& objective,
                                     std::span<const double> params) {
    const ParamCircuit& circuit = objective.circuit();
    if (static_cast<int>(params.size()) != circuit.n_params()) {
        throw InvalidInputError("gradient_fourier: parameter length mismatch");
    }
    if (circuit.max_multiplicity() > 1) {
        throw UnsupportedShapeError(
            "gradient_fourier: circuit has pinned parameters; "
            "use gradient_via_tomography");
    }
    constexpr double shift = std::numbers::pi / 3.0;
    const double scale = 2.0 / std::sqrt(3.0);

    std::vector<double> work(params.begin(), params.end());
    std::vector<double> grad(params.size());
    for (std::size_t d = 0; d < work.size(); ++d) {
        work[d] = params[d] + shift;
        const double plus = objective.evaluate(work);
        work[d] = params[d] - shift;
        const double minus = objective.evaluate(work);
        work[d] = params[d];
        grad[d] = scale * (plus - minus);
    }
    return grad;
}

GradientFn make_objective_gradient(Objective& objective) {
    if (objective.circuit().max_multiplicity() > 1) {
        return [&objective](std::span<const double> params) {
            return gradient_via_tomography(objective, params);
        };
    }
    return [&objective](std::span<const double> params) {
        return gradient_fourier(objective, params);
    };
}

} // namespace vqopt
