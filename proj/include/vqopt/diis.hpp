#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vqopt {

struct DIISEntry {
    std::vector<double> state;
    std::vector<double> error;
};

enum class DIISVariant { Anderson, Pulay };

/// Bounded iterative history of (state, error) pairs for Anderson/Pulay
/// sequence acceleration. Insertion beyond capacity evicts the entry with
/// the largest error 2-norm; the whole history is flushed every
/// flush_period insertions (0 disables flushing).
class DIISHistory {
public:
    explicit DIISHistory(std::size_t capacity = 10, int flush_period = 40);

    void insert(std::vector<double> state, std::vector<double> error);

    /// Solves the bordered least-squares system
    ///   [B  -1; -1^T  0] [c; lambda] = [0; -1],  B_ij = e_i . e_j,
    /// and returns sum_i c_i state_i with sum_i c_i = 1. When the condition
    /// estimate of B exceeds 1e12 the oldest entry is dropped and the solve
    /// retried. Throws InvalidStateError on an empty history.
    std::vector<double> extrapolate() const;

    /// The coefficients of the most recent solvable subsystem (same
    /// drop-oldest policy as extrapolate), aligned with entries().back()
    /// side; coefficients of dropped leading entries are reported as 0.
    std::vector<double> coefficients() const;

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::size_t capacity() const { return capacity_; }
    const std::vector<DIISEntry>& entries() const { return entries_; }

    void clear();

private:
    std::vector<double> solve(std::size_t first) const;

    std::size_t capacity_;
    int flush_period_;
    int inserts_since_flush_ = 0;
    std::vector<DIISEntry> entries_;
};

/// One acceleration step, sequenced per variant:
///  - Anderson: inserts (params_new, params_new - params_prev_extrapolated)
///    after a sweep and returns the extrapolation.
///  - Pulay: inserts (params_new, gradient_provider()) before the next sweep
///    and returns the extrapolation. The provider's evaluations are counted
///    by whoever owns the objective.
std::vector<double> accelerate_step(
    DIISHistory& history, DIISVariant variant, std::span<const double> params_new,
    std::span<const double> params_prev_extrapolated,
    const std::function<std::vector<double>()>& gradient_provider);

} // namespace vqopt
