#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vqopt/objective.hpp"

namespace vqopt {

/// One randomized tomography cross-check: a random circuit with the given
/// cluster shape, fitted from its quadrature grid, then compared with direct
/// simulation on a dense angle grid.
struct VerificationCase {
    std::vector<int> orders;
    std::size_t quadrature_points = 0;
    double max_relative_deviation = 0.0;
};

struct VerificationReport {
    std::vector<VerificationCase> cases;
    double max_relative_deviation = 0.0;
    double elapsed_seconds = 0.0;
};

/// Random circuit with the requested parameter multiplicities: the pinned Ry
/// gates are shuffled across the circuit and separated by random fixed
/// unitaries; the observable is a random Pauli sum.
Objective make_random_tomography_objective(std::span<const int> orders, int n_qubits,
                                           std::mt19937_64& rng);

/// Runs the battery of random cluster shapes up to max_m axes and pinning
/// order max_g (all-ones, one pinned axis, and fully pinned pairs), and
/// reports the worst relative deviation between the fitted models and dense
/// direct simulation.
VerificationReport verify_tomography(int max_m, int max_g, std::uint64_t seed);

} // namespace vqopt
