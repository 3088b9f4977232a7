#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vqopt/errors.hpp"
#include "vqopt/tomography.hpp"
#include "vqopt/verify.hpp"

using namespace vqopt;

namespace {

constexpr double pi = std::numbers::pi;

Objective single_ry_z_objective() {
    ParamCircuit circuit(1, 1);
    circuit.add(Gate::ry(0, 0));
    PauliSum z(1);
    z.add_term(1.0, "Z");
    return Objective(std::move(circuit), std::move(z), {StateVector(1)});
}

/// 1-axis model with coefficients given as (const, cos, sin).
TomographyModel model_1d(double alpha, double beta, double gamma) {
    ClusterSpec cluster;
    cluster.param_indices = {0};
    cluster.orders = {1};
    return TomographyModel(cluster, {gamma, alpha, beta}, {0.0});
}

} // namespace

TEST_CASE("three point grid is canonical, higher orders follow the formula") {
    const auto g1 = fourier_grid(1);
    REQUIRE(g1.size() == 3);
    CHECK(g1[0] == doctest::Approx(-pi / 3.0));
    CHECK(g1[1] == doctest::Approx(0.0));
    CHECK(g1[2] == doctest::Approx(pi / 3.0));

    const auto g2 = fourier_grid(2);
    REQUIRE(g2.size() == 5);
    const double expected[5] = {-3.0 * pi / 10.0, -pi / 10.0, pi / 10.0,
                                3.0 * pi / 10.0, pi / 2.0};
    for (int i = 0; i < 5; ++i) CHECK(g2[i] == doctest::Approx(expected[i]));

    CHECK(fourier_grid(5).size() == 11);
    CHECK_THROWS_AS(fourier_grid(0), InvalidInputError);
}

TEST_CASE("order-1 transfer matrix matches the closed form") {
    const TransferMatrix t = transfer_matrix(1);
    // columns in storage order (sin, const, cos); compare the
    // (const, cos, sin) view against the known entries
    const int col_const = 1, col_cos = 2, col_sin = 0;
    const double s32 = std::sqrt(3.0) / 2.0;
    const double forward[3][3] = {
        {1.0, -0.5, -s32}, {1.0, 1.0, 0.0}, {1.0, -0.5, s32}};
    for (int p = 0; p < 3; ++p) {
        CHECK(t.forward(p, col_const) == doctest::Approx(forward[p][0]));
        CHECK(t.forward(p, col_cos) == doctest::Approx(forward[p][1]));
        CHECK(t.forward(p, col_sin) == doctest::Approx(forward[p][2]));
    }
    // inverse rows, (const, cos, sin) view: (1/3)[[1,1,1],[-1,2,-1],[-r3,0,r3]]
    const double r3 = std::sqrt(3.0);
    const double inverse[3][3] = {
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
        {-1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0},
        {-r3 / 3.0, 0.0, r3 / 3.0}};
    const int rows[3] = {col_const, col_cos, col_sin};
    for (int r = 0; r < 3; ++r) {
        for (int p = 0; p < 3; ++p) {
            CHECK(t.inverse(rows[r], p) == doctest::Approx(inverse[r][p]));
        }
    }
}

TEST_CASE("forward times inverse is the identity for all orders") {
    for (int order = 1; order <= 5; ++order) {
        const TransferMatrix t = transfer_matrix(order);
        const int n = 2 * order + 1;
        const double residual =
            (t.forward * t.inverse - Eigen::MatrixXd::Identity(n, n))
                .cwiseAbs()
                .maxCoeff();
        CHECK(residual < 1e-12);
    }
}

TEST_CASE("single gate fit recovers the cosine") {
    Objective obj = single_ry_z_objective();
    const double params[1] = {0.37}; // frozen value is irrelevant for M=1
    const TomographyModel model =
        fit_cluster(obj, params, make_cluster(obj.circuit(), {0}));
    const int digits_sin[1] = {-1}, digits_const[1] = {0}, digits_cos[1] = {1};
    CHECK(model.coefficient(digits_const) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(model.coefficient(digits_cos) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(model.coefficient(digits_sin) == doctest::Approx(0.0).epsilon(1e-13));
    // dense check against direct simulation
    for (int k = 0; k < 32; ++k) {
        const double theta = -pi / 2.0 + k * pi / 32.0;
        const double angle[1] = {theta};
        const double sim[1] = {theta};
        CHECK(model.eval(angle) == doctest::Approx(obj.evaluate(sim)).epsilon(1e-12));
    }
}

TEST_CASE("two sequential ry gates give the cos(2a+2b) coupling") {
    ParamCircuit circuit(1, 2);
    circuit.add(Gate::ry(0, 0));
    circuit.add(Gate::ry(1, 0));
    PauliSum z(1);
    z.add_term(1.0, "Z");
    Objective obj(std::move(circuit), std::move(z), {StateVector(1)});

    const double params[2] = {0.1, -0.4};
    const TomographyModel model =
        fit_cluster(obj, params, make_cluster(obj.circuit(), {0, 1}));

    // only cos*cos = +1 and sin*sin = -1 survive
    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            const int digits[2] = {a, b};
            double expected = 0.0;
            if (a == 1 && b == 1) expected = 1.0;
            if (a == -1 && b == -1) expected = -1.0;
            CHECK(model.coefficient(digits) ==
                  doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("random two-axis cluster matches dense simulation") {
    std::mt19937_64 rng(101);
    const std::vector<int> orders = {1, 1};
    Objective obj = make_random_tomography_objective(orders, 3, rng);
    std::vector<double> params = {0.2, -0.7};
    const TomographyModel model =
        fit_cluster(obj, params, make_cluster(obj.circuit(), {0, 1}));

    double max_err = 0.0, scale = 0.0;
    std::vector<double> work = params;
    for (int i = 0; i < 32; ++i) {
        for (int j = 0; j < 32; ++j) {
            const double a = -pi / 2.0 + i * pi / 32.0;
            const double b = -pi / 2.0 + j * pi / 32.0;
            work[0] = a;
            work[1] = b;
            const double direct = obj.evaluate(work);
            const double angles[2] = {a, b};
            max_err = std::max(max_err, std::abs(direct - model.eval(angles)));
            scale = std::max(scale, std::abs(direct));
        }
    }
    CHECK(max_err / scale <= 1e-12);
}

TEST_CASE("model evaluation at the quadrature points reproduces the samples") {
    std::mt19937_64 rng(5);
    const std::vector<int> orders = {1, 2};
    Objective obj = make_random_tomography_objective(orders, 3, rng);
    std::vector<double> params = {0.0, 0.0};
    ClusterSpec cluster;
    cluster.param_indices = {0, 1};
    cluster.orders = orders;
    const TomographyModel model = fit_cluster(obj, params, cluster);
    std::vector<double> work = params;
    for (double a : fourier_grid(1)) {
        for (double b : fourier_grid(2)) {
            work[0] = a;
            work[1] = b;
            const double angles[2] = {a, b};
            CHECK(model.eval(angles) ==
                  doctest::Approx(obj.evaluate(work)).epsilon(1e-10));
        }
    }
}

TEST_CASE("fit enforces the grid cap") {
    std::mt19937_64 rng(3);
    const std::vector<int> orders = {1, 1};
    Objective obj = make_random_tomography_objective(orders, 2, rng);
    const ClusterSpec cluster = make_cluster(obj.circuit(), {0, 1});
    const double params[2] = {0.0, 0.0};
    CHECK_THROWS_AS(fit_cluster(obj, params, cluster, /*max_grid=*/8),
                    ResourceLimitError);
}

TEST_CASE("model eval and derivatives of simple coefficient sets") {
    const TomographyModel m234 = model_1d(2.0, 3.0, 4.0);
    const double zero[1] = {0.0}, quarter[1] = {pi / 4.0};
    CHECK(m234.eval(zero) == doctest::Approx(5.0));
    CHECK(m234.eval(quarter) == doctest::Approx(6.0));

    const TomographyModel cos2t = model_1d(0.0, 1.0, 0.0);
    CHECK(cos2t.gradient(zero)[0] == doctest::Approx(0.0));
    CHECK(cos2t.hessian(zero)(0, 0) == doctest::Approx(-4.0));

    const TomographyModel sin2t = model_1d(0.0, 0.0, 1.0);
    CHECK(sin2t.gradient(zero)[0] == doctest::Approx(2.0));
}

TEST_CASE("model gradient and hessian match finite differences") {
    std::mt19937_64 rng(23);
    ClusterSpec cluster;
    cluster.param_indices = {0, 1, 2};
    cluster.orders = {1, 2, 1};
    std::vector<double> coeffs(cluster.grid_size());
    for (double& c : coeffs) c = oracles::uniform(rng, -1.0, 1.0);
    const TomographyModel model(cluster, coeffs, {});

    const double h = 1e-6;
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> angles(3);
        for (double& a : angles) a = oracles::uniform(rng, -1.5, 1.5);
        const std::vector<double> grad = model.gradient(angles);
        const Eigen::MatrixXd hess = model.hessian(angles);
        CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        for (int d = 0; d < 3; ++d) {
            std::vector<double> plus = angles, minus = angles;
            plus[d] += h;
            minus[d] -= h;
            const double fd = (model.eval(plus) - model.eval(minus)) / (2.0 * h);
            CHECK(std::abs(grad[d] - fd) < 1e-6);
            const std::vector<double> gp = model.gradient(plus);
            const std::vector<double> gm = model.gradient(minus);
            for (int e = 0; e < 3; ++e) {
                const double fd2 = (gp[e] - gm[e]) / (2.0 * h);
                CHECK(std::abs(hess(d, e) - fd2) < 1e-5);
            }
        }
    }
}

TEST_CASE("analytic optimal angle") {
    CHECK(*analytic_theta_star(-1.0, 0.0) == doctest::Approx(0.0));
    CHECK(*analytic_theta_star(0.0, -1.0) == doctest::Approx(pi / 4.0));
    CHECK(*analytic_theta_star(1.0, 0.0) == doctest::Approx(-pi / 2.0));
    CHECK(!analytic_theta_star(0.0, 0.0).has_value());
}

TEST_CASE("analytic angle always sits at a nonnegative-curvature point") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const double beta = oracles::uniform(rng, -2.0, 2.0);
        const double gamma = oracles::uniform(rng, -2.0, 2.0);
        const auto star = analytic_theta_star(beta, gamma);
        REQUIRE(star.has_value());
        CHECK(*star >= -pi / 2.0);
        CHECK(*star < pi / 2.0);
        const double hess = -4.0 * beta * std::cos(2.0 * *star) -
                            4.0 * gamma * std::sin(2.0 * *star);
        CHECK(hess >= 0.0);
    }
}

TEST_CASE("one axis optimization reaches the boundary minimum") {
    const TomographyModel model = model_1d(0.0, 1.0, 0.0); // cos 2t
    const double seed[1] = {0.3};
    const std::vector<double> opt = optimize_model(model, seed);
    CHECK(model.eval(opt) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(std::abs(opt[0]) - pi / 2.0) < 1e-10);
}

TEST_CASE("two axis optimization matches a dense grid oracle") {
    // cos 2a + cos 2b + 0.5 cos 2a cos 2b
    ClusterSpec cluster;
    cluster.param_indices = {0, 1};
    cluster.orders = {1, 1};
    std::vector<double> coeffs(9, 0.0);
    coeffs[1 * 3 + 2] = 1.0; // digits (0, +1): cos 2b
    coeffs[2 * 3 + 1] = 1.0; // digits (+1, 0): cos 2a
    coeffs[2 * 3 + 2] = 0.5; // digits (+1, +1)
    const TomographyModel model(cluster, coeffs, {});

    // dense scan oracle
    double oracle_best = 1e300;
    for (int i = 0; i < 400; ++i) {
        for (int j = 0; j < 400; ++j) {
            const double angles[2] = {-pi / 2.0 + i * pi / 400.0,
                                      -pi / 2.0 + j * pi / 400.0};
            oracle_best = std::min(oracle_best, model.eval(angles));
        }
    }
    CHECK(oracle_best == doctest::Approx(-1.5).epsilon(1e-3));

    const double seed[2] = {0.2, -0.1};
    const std::vector<double> opt = optimize_model(model, seed);
    CHECK(model.eval(opt) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(std::abs(std::abs(opt[0]) - pi / 2.0) < 1e-10);
    CHECK(std::abs(std::abs(opt[1]) - pi / 2.0) < 1e-10);
}

TEST_CASE("degenerate valley: any point on the minimum manifold is accepted") {
    // cos(2a + 2b): minima on a + b = pi/2 (mod pi)
    ClusterSpec cluster;
    cluster.param_indices = {0, 1};
    cluster.orders = {1, 1};
    std::vector<double> coeffs(9, 0.0);
    coeffs[2 * 3 + 2] = 1.0;  // cos cos
    coeffs[0 * 3 + 0] = -1.0; // sin sin
    const TomographyModel model(cluster, coeffs, {});
    const double seed[2] = {0.3, 0.1};
    const std::vector<double> opt = optimize_model(model, seed);
    CHECK(model.eval(opt) == doctest::Approx(-1.0).epsilon(1e-12));
    const double s = opt[0] + opt[1];
    // distance from the manifold s = pi/2 (mod pi)
    const double dist = std::abs(s - pi * std::floor((s - pi / 2.0) / pi + 0.5) - pi / 2.0);
    CHECK(dist < 1e-10);
}

TEST_CASE("optimizer never returns worse than the seed") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        ClusterSpec cluster;
        cluster.param_indices = {0, 1};
        cluster.orders = {1, (trial % 3 == 0) ? 2 : 1};
        std::vector<double> coeffs(cluster.grid_size());
        for (double& c : coeffs) c = oracles::uniform(rng, -1.0, 1.0);
        const TomographyModel model(cluster, coeffs, {});
        std::vector<double> seed(2);
        for (double& s : seed) s = oracles::uniform(rng, -1.5, 1.5);
        const std::vector<double> opt = optimize_model(model, seed);
        CHECK(model.eval(opt) <= model.eval(seed) + 1e-12);
        const std::vector<double> grad = model.gradient(opt);
        for (double g : grad) CHECK(std::abs(g) < 1e-8);
    }
}

TEST_CASE("alternate quadrature grids give the same model") {
    std::mt19937_64 rng(55);
    const std::vector<int> orders = {1};
    for (int trial = 0; trial < 10; ++trial) {
        Objective obj = make_random_tomography_objective(orders, 3, rng);
        const ClusterSpec cluster = make_cluster(obj.circuit(), {0});
        const std::vector<double> params = {0.0};
        const TomographyModel canonical = fit_cluster(obj, params, cluster);
        const TomographyModel alternate = fit_cluster_on_grids(
            obj, params, cluster, {{-pi / 4.0, 0.0, pi / 4.0}});
        for (int k = 0; k < 64; ++k) {
            const double angle[1] = {-pi / 2.0 + k * pi / 64.0};
            CHECK(std::abs(canonical.eval(angle) - alternate.eval(angle)) < 1e-10);
        }
    }
}

TEST_CASE("pinned pair fit consumes (2G+1)^2 evaluations and stays exact") {
    std::mt19937_64 rng(91);
    const std::vector<int> orders = {5, 5};
    Objective obj = make_random_tomography_objective(orders, 3, rng);
    ClusterSpec cluster;
    cluster.param_indices = {0, 1};
    cluster.orders = orders;
    const std::vector<double> params = {0.1, 0.2};
    const long long before = obj.evals();
    const TomographyModel model = fit_cluster(obj, params, cluster);
    CHECK(obj.evals() - before == 121);

    double max_err = 0.0, scale = 0.0;
    std::vector<double> work = params;
    for (int i = 0; i < 24; ++i) {
        for (int j = 0; j < 24; ++j) {
            work[0] = -pi / 2.0 + i * pi / 24.0;
            work[1] = -pi / 2.0 + j * pi / 24.0;
            const double direct = obj.evaluate(work);
            const double angles[2] = {work[0], work[1]};
            max_err = std::max(max_err, std::abs(direct - model.eval(angles)));
            scale = std::max(scale, std::abs(direct));
        }
    }
    CHECK(max_err / scale <= 1e-12);
}

TEST_CASE("tomography gradient handles pinned circuits") {
    std::mt19937_64 rng(121);
    const std::vector<int> orders = {2, 1};
    Objective obj = make_random_tomography_objective(orders, 3, rng);
    std::vector<double> params = {0.3, -0.2};
    const std::vector<double> g = gradient_via_tomography(obj, params);
    const std::vector<double> fd =
        oracles::finite_difference_gradient(obj, params, 1e-5);
    for (std::size_t d = 0; d < g.size(); ++d) {
        CHECK(std::abs(g[d] - fd[d]) < 1e-7);
    }
}
