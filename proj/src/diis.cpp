#include "vqopt/diis.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "vqopt/errors.hpp"

namespace vqopt {

namespace {

double norm2(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

} // namespace

DIISHistory::DIISHistory(std::size_t capacity, int flush_period)
    : capacity_(capacity), flush_period_(flush_period) {
    if (capacity_ < 1) throw InvalidInputError("DIISHistory: capacity must be >= 1");
}

void DIISHistory::insert(std::vector<double> state, std::vector<double> error) {
    if (state.size() != error.size()) {
        throw InvalidInputError("DIISHistory::insert: state/error length mismatch");
    }
    if (!entries_.empty() && state.size() != entries_.front().state.size()) {
        throw InvalidInputError("DIISHistory::insert: dimension mismatch with history");
    }
    if (flush_period_ > 0 && inserts_since_flush_ >= flush_period_) {
        entries_.clear();
        inserts_since_flush_ = 0;
    }
    entries_.push_back(DIISEntry{std::move(state), std::move(error)});
    ++inserts_since_flush_;
    if (entries_.size() > capacity_) {
        std::size_t worst = 0;
        double worst_norm = -1.0;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const double n = norm2(entries_[i].error);
            if (n > worst_norm) {
                worst_norm = n;
                worst = i;
            }
        }
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(worst));
    }
}

void DIISHistory::clear() {
    entries_.clear();
    inserts_since_flush_ = 0;
}

std::vector<double> DIISHistory::solve(std::size_t first) const {
    const std::size_t k = entries_.size() - first;
    Eigen::MatrixXd b(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            const auto& ei = entries_[first + i].error;
            const auto& ej = entries_[first + j].error;
            double dot = 0.0;
            for (std::size_t g = 0; g < ei.size(); ++g) dot += ei[g] * ej[g];
            b(i, j) = dot;
            b(j, i) = dot;
        }
    }
    // Scaling B leaves the coefficients unchanged (only the multiplier
    // rescales) and keeps the condition estimate meaningful near
    // convergence, where the error norms get tiny.
    double scale = b.diagonal().maxCoeff();
    if (!(scale > 0.0)) scale = 1.0;

    // Condition is estimated on the bordered system, not on B alone: a
    // singular Gram matrix (errors that span the state space exactly) still
    // gives a perfectly solvable bordered system, and that case must
    // extrapolate exactly rather than shrink the history.
    Eigen::MatrixXd bordered = Eigen::MatrixXd::Zero(k + 1, k + 1);
    bordered.topLeftCorner(k, k) = b / scale;
    for (std::size_t i = 0; i < k; ++i) {
        bordered(i, k) = -1.0;
        bordered(k, i) = -1.0;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        bordered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 0.0) || smax / smin > 1e12) {
        return {}; // signal ill-conditioned
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    rhs(k) = -1.0;
    const Eigen::VectorXd sol = svd.solve(rhs);
    std::vector<double> coeffs(k);
    for (std::size_t i = 0; i < k; ++i) coeffs[i] = sol(i);
    return coeffs;
}

std::vector<double> DIISHistory::coefficients() const {
    if (entries_.empty()) {
        throw InvalidStateError("DIISHistory: empty history");
    }
    for (std::size_t first = 0; first < entries_.size(); ++first) {
        std::vector<double> c = solve(first);
        if (!c.empty()) {
            std::vector<double> full(entries_.size(), 0.0);
            for (std::size_t i = 0; i < c.size(); ++i) full[first + i] = c[i];
            return full;
        }
    }
    // Single-entry solve cannot be ill-conditioned; unreachable.
    throw InternalError("DIISHistory: no solvable subsystem");
}

std::vector<double> DIISHistory::extrapolate() const {
    const std::vector<double> c = coefficients();
    double sum = 0.0;
    for (double ci : c) sum += ci;
    if (std::abs(sum - 1.0) >= 1e-10) {
        throw InternalError("DIIS coefficients violate normalization: sum = " +
                            std::to_string(sum));
    }
    std::vector<double> out(entries_.front().state.size(), 0.0);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (c[i] == 0.0) continue;
        const auto& s = entries_[i].state;
        for (std::size_t g = 0; g < out.size(); ++g) out[g] += c[i] * s[g];
    }
    return out;
}

std::vector<double> accelerate_step(
    DIISHistory& history, DIISVariant variant, std::span<const double> params_new,
    std::span<const double> params_prev_extrapolated,
    const std::function<std::vector<double>()>& gradient_provider) {
    std::vector<double> state(params_new.begin(), params_new.end());
    std::vector<double> error;
    switch (variant) {
        case DIISVariant::Anderson: {
            if (params_prev_extrapolated.size() != params_new.size()) {
                throw InvalidInputError("accelerate_step: previous extrapolated "
                                        "state required for Anderson");
            }
            error.resize(params_new.size());
            for (std::size_t i = 0; i < error.size(); ++i) {
                error[i] = params_new[i] - params_prev_extrapolated[i];
            }
            break;
        }
        case DIISVariant::Pulay: {
            if (!gradient_provider) {
                throw InvalidInputError("accelerate_step: gradient provider "
                                        "required for Pulay");
            }
            error = gradient_provider();
            if (error.size() != params_new.size()) {
                throw InvalidInputError("accelerate_step: gradient length mismatch");
            }
            break;
        }
    }
    history.insert(std::move(state), std::move(error));
    return history.extrapolate();
}

} // namespace vqopt
