#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vqopt/circuit.hpp"
#include "vqopt/pauli.hpp"

namespace vqopt {

/// A real objective with an evaluation counter. One call to evaluate() is
/// one "observable expectation value" in the cost accounting of every
/// optimizer in this library, so all methods are directly comparable.
class CountedFunction {
public:
    virtual ~CountedFunction() = default;

    double evaluate(std::span<const double> x) {
        ++evals_;
        return value(x);
    }

    long long evals() const { return evals_; }
    virtual int dimension() const = 0;

protected:
    virtual double value(std::span<const double> x) const = 0;

private:
    long long evals_ = 0;
};

/// Wraps an arbitrary callable as a counted objective (used by the baseline
/// optimizers' tests; circuit objectives use Objective below).
class FunctionObjective final : public CountedFunction {
public:
    using Fn = std::function<double(std::span<const double>)>;
    FunctionObjective(int dimension, Fn fn) : dim_(dimension), fn_(std::move(fn)) {}
    int dimension() const override { return dim_; }

protected:
    double value(std::span<const double> x) const override { return fn_(x); }

private:
    int dim_;
    Fn fn_;
};

/// State-averaged circuit expectation value:
///   O(theta) = (1/N) sum_ref <ref| U^dag(theta) H U(theta) |ref>.
/// Evaluation is pure apart from the counter; identical parameters give
/// bit-identical results. A state-averaged evaluation counts as one
/// observable regardless of the number of reference states.
class Objective final : public CountedFunction {
public:
    Objective(ParamCircuit circuit, PauliSum observable,
              std::vector<StateVector> references);

    /// References given as computational basis indices.
    static Objective from_basis_references(ParamCircuit circuit, PauliSum observable,
                                           const std::vector<std::uint64_t>& indices);

    const ParamCircuit& circuit() const { return circuit_; }
    const PauliSum& observable() const { return observable_; }
    const std::vector<StateVector>& references() const { return references_; }
    int dimension() const override { return circuit_.n_params(); }

protected:
    double value(std::span<const double> params) const override;

private:
    ParamCircuit circuit_;
    PauliSum observable_;
    std::vector<StateVector> references_;
};

/// Analytic gradient from the three-point Fourier quadrature:
///   g_d = (2/sqrt 3) [O(theta_d + pi/3) - O(theta_d - pi/3)].
/// Exact for circuits whose parameters all have multiplicity 1; costs
/// exactly 2 * n_params evaluations. Throws UnsupportedShapeError when a
/// pinned parameter is present (use gradient_via_tomography instead).
std::vector<double> gradient_fourier(Objective& objective,
                                     std::span<const double> params);

using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

/// Gradient provider for a circuit objective: Fourier quadrature when every
/// multiplicity is 1, per-parameter tomography-model differentiation
/// otherwise. Evaluations are counted against the objective either way.
GradientFn make_objective_gradient(Objective& objective);

} // namespace vqopt
