#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vqopt/objective.hpp"

namespace vqopt {

/// A cluster of circuit parameters optimized jointly. orders[d] is the
/// pinning order G of parameter d (its multiplicity in the circuit); the
/// quadrature grid for the cluster has prod_d (2*orders[d] + 1) points.
struct ClusterSpec {
    std::vector<int> param_indices;
    std::vector<int> orders;

    std::size_t size() const { return param_indices.size(); }
    std::size_t grid_size() const;
    void validate() const;
};

/// ClusterSpec with orders taken from the circuit's parameter multiplicities.
ClusterSpec make_cluster(const ParamCircuit& circuit, std::vector<int> param_indices);

/// Trigonometric basis, indexed by i in [-G, G]:
///   phi_0 = 1, phi_{+k}(t) = cos(2kt), phi_{-k}(t) = sin(2kt).
/// Stored per axis in index order i = -G..G (sin G, ..., sin 1, 1, cos 1,
/// ..., cos G).
double basis_function(int i, double theta);
double basis_derivative(int i, double theta);
double basis_second_derivative(int i, double theta);

/// Quadrature angles for one axis of order G. G=1 uses the canonical
/// three-point grid {-pi/3, 0, +pi/3}; G>=2 uses the uniform grid
/// theta_p = (p+1)pi/(2G+1) - pi/2 for p in [0, 2G+1).
std::vector<double> fourier_grid(int order);

/// Maps basis coefficients to samples (forward, row p = phi_i(theta_p)) and
/// back (inverse). The inverse is verified against the forward product on
/// construction.
struct TransferMatrix {
    int order = 0;
    std::vector<double> grid;
    Eigen::MatrixXd forward;
    Eigen::MatrixXd inverse;
};

TransferMatrix transfer_matrix(int order);
TransferMatrix transfer_matrix_on_grid(int order, std::span<const double> grid);

/// Closed-form trigonometric surrogate of the objective over one cluster,
/// with the remaining circuit parameters frozen at fit time. Exact (not an
/// approximation) for noiseless Ry-parameterized circuits. All model
/// operations are classical and do not touch the evaluation counter.
class TomographyModel {
public:
    TomographyModel(ClusterSpec cluster, std::vector<double> coefficients,
                    std::vector<double> frozen_params);

    const ClusterSpec& cluster() const { return cluster_; }
    std::span<const double> coefficients() const { return coeffs_; }
    std::span<const double> frozen_params() const { return frozen_; }

    /// Coefficient c_I for the multi-index with digits[d] in [-G_d, G_d].
    double coefficient(std::span<const int> digits) const;

    double eval(std::span<const double> angles) const;
    std::vector<double> gradient(std::span<const double> angles) const;
    Eigen::MatrixXd hessian(std::span<const double> angles) const;

    /// Conditional-coefficient contraction: every axis except `axis` is
    /// contracted with its basis vector at the given angles, leaving the
    /// (2G+1) coefficients of the one-dimensional restriction along `axis`
    /// (index order i = -G..G).
    std::vector<double> axis_profile(int axis, std::span<const double> angles) const;

private:
    ClusterSpec cluster_;
    std::vector<double> coeffs_; // row-major over axes, per-axis index i+G
    std::vector<double> frozen_;
};

inline constexpr std::size_t default_grid_cap = 729; // 3^6

/// Samples the objective on the Cartesian quadrature grid (grid_size()
/// evaluations, all counted) and applies the inverse transfer axis by axis;
/// the Kronecker-product matrix is never materialized. The fitted model is
/// checked to reproduce every sample within 1e-10 before it is returned.
TomographyModel fit_cluster(Objective& objective, std::span<const double> params,
                            const ClusterSpec& cluster,
                            std::size_t max_grid = default_grid_cap);

/// Same fit on caller-provided per-axis grids (each axis needs 2G+1 distinct
/// angles). Any distinct angles give a nonsingular transfer matrix.
TomographyModel fit_cluster_on_grids(Objective& objective,
                                     std::span<const double> params,
                                     const ClusterSpec& cluster,
                                     const std::vector<std::vector<double>>& grids,
                                     std::size_t max_grid = default_grid_cap);

/// Fit from already-sampled values (row-major over the per-axis grids).
/// Used by the sweep driver when the grid center value is carried over from
/// the previous cluster's optimized model.
TomographyModel fit_from_samples(const ClusterSpec& cluster,
                                 const std::vector<std::vector<double>>& grids,
                                 std::span<const double> samples,
                                 std::vector<double> frozen_params);

/// Optimal angle of the order-1 restriction alpha + beta cos 2t + gamma
/// sin 2t: t* = arctan2(-gamma, -beta) / 2, wrapped into [-pi/2, pi/2).
/// The Hessian at t* is 4*hypot(beta, gamma) >= 0, so t* is always the
/// minimum. Returns nullopt on a flat axis (|beta|, |gamma| < 1e-14); the
/// caller keeps the current angle.
std::optional<double> analytic_theta_star(double beta, double gamma);

/// Classical minimization on the surrogate: pi/8 rectilinear grid scan
/// seeded with the given angles, coordinate-wise analytic updates (dense
/// scan + Newton on the axis profile for pinned axes of order >= 2), then
/// full Newton polish while the Hessian stays positive definite. Returns a
/// stationary point with model value <= the value at the seed. The surface
/// may hold several local minima; one is returned.
std::vector<double> optimize_model(const TomographyModel& model,
                                   std::span<const double> seed_angles);

/// Objective gradient from per-parameter one-axis tomography fits; works for
/// pinned circuits. Costs sum_d (2*G_d + 1) evaluations.
std::vector<double> gradient_via_tomography(Objective& objective,
                                            std::span<const double> params);

} // namespace vqopt
