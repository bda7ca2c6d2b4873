#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "splitting/errors.hpp"
#include "splitting/linear.hpp"
#include "splitting/methods.hpp"
#include "splitting/problems.hpp"
#include "support.hpp"

using namespace splitting;
using testing_support::random_vector;

namespace {

// One-step matrix obtained by integrating the unit vectors with the method
// itself, independent of the shear-product construction.
Eigen::Matrix2d matrix_by_integration(const CompositionSpec& spec, double h) {
    const auto ho = harmonic_oscillator();
    const auto m = make_integrator(spec, ho.system);
    const State c1 = m.step(h, State{1.0, 0.0});
    const State c2 = m.step(h, State{0.0, 1.0});
    Eigen::Matrix2d K;
    K << c1[0], c2[0], c1[1], c2[1];
    return K;
}

Eigen::Matrix2d to_eigen(const StabilityMatrix& K) {
    Eigen::Matrix2d M;
    M << K.k1, K.k2, K.k3, K.k4;
    return M;
}

std::vector<CompositionSpec> catalog() {
    std::vector<CompositionSpec> out;
    for (const auto& name : catalog_names()) out.push_back(catalog_spec(name));
    return out;
}

}  // namespace

TEST_CASE("stability matrix agrees with integrating the unit vectors") {
    for (const auto& spec : catalog()) {
        CAPTURE(spec.label);
        for (double h : {0.1, 0.7, 1.5}) {
            const Eigen::Matrix2d diff = to_eigen(stability_matrix(spec, h)) - matrix_by_integration(spec, h);
            CHECK(diff.cwiseAbs().maxCoeff() < 1e-13);
        }
    }
}

TEST_CASE("drift-first symplectic euler matrix") {
    const double h = 0.3;
    const auto K = stability_matrix(symplectic_euler_adjoint(), h);
    CHECK(K.k1 == doctest::Approx(1.0));
    CHECK(K.k2 == doctest::Approx(h));
    CHECK(K.k3 == doctest::Approx(-h));
    CHECK(K.k4 == doctest::Approx(1.0 - h * h));
}

TEST_CASE("one-step matrices are unimodular for every catalog method") {
    for (const auto& spec : catalog()) {
        CAPTURE(spec.label);
        for (int i = 1; i <= 400; ++i) {
            const double h = 0.01 * i;
            CHECK(std::abs(stability_matrix(spec, h).det() - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("symmetric methods have equal diagonal entries") {
    for (const auto& spec : {leapfrog(), triple_jump(2), suzuki5()}) {
        const auto K = stability_matrix(spec, 0.37);
        CHECK(K.k1 == doctest::Approx(K.k4).epsilon(1e-13));
        // Even in h: p(h) = p(-h).
        CHECK(stability_matrix(spec, -0.37).half_trace() == doctest::Approx(K.half_trace()).epsilon(1e-14));
    }
}

TEST_CASE("stability thresholds") {
    CHECK(stability_threshold(leapfrog()) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(stability_threshold(symplectic_euler()) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(stability_threshold(triple_jump(2)) == doctest::Approx(1.5734).epsilon(1e-4));

    CompositionSpec trivial;
    trivial.form = Form::BAB;
    trivial.a = {0.0};
    trivial.b = {0.0, 0.0};
    CHECK(stability_threshold(trivial, 10.0) == std::numeric_limits<double>::infinity());

    CompositionSpec antidamped;
    antidamped.form = Form::BAB;
    antidamped.a = {1.0};
    antidamped.b = {-1.0, 0.0};
    CHECK(stability_threshold(antidamped) == 0.0);
    CHECK_THROWS_AS(stability_threshold(leapfrog(), 1.0, 2.0), ConfigurationError);
}

TEST_CASE("stability functions classify the boundary") {
    StabilityMatrix identity;
    CHECK(stability_functions(identity).stable);
    StabilityMatrix shear{1.0, 1.0, 0.0, 1.0, 0.1};
    CHECK_FALSE(stability_functions(shear).stable);
    const auto f = stability_functions(stability_matrix(leapfrog(), 2.5));
    CHECK_FALSE(f.stable);
}

TEST_CASE("powers of K follow the rotation form") {
    for (const auto& spec : catalog()) {
        const double h = 0.4;
        const auto K = stability_matrix(spec, h);
        const auto f = stability_functions(K);
        REQUIRE(f.stable);
        const Eigen::Matrix2d M = to_eigen(K);
        const Eigen::Matrix2d N = (M - f.p * Eigen::Matrix2d::Identity()) / std::sin(f.phi);
        Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
        for (int n = 1; n <= 200; ++n) {
            P = P * M;
            if (n % 50 == 0) {
                const Eigen::Matrix2d R = std::cos(n * f.phi) * Eigen::Matrix2d::Identity() + std::sin(n * f.phi) * N;
                CHECK((P - R).cwiseAbs().maxCoeff() < 1e-11);
            }
        }
    }
}

TEST_CASE("modified frequency equals the eigenvalue argument over h") {
    for (const auto& spec : catalog()) {
        for (double h : {0.2, 0.9}) {
            const Eigen::EigenSolver<Eigen::Matrix2d> es(to_eigen(stability_matrix(spec, h)));
            const double arg = std::abs(std::arg(es.eigenvalues()[0]));
            const auto mf = modified_frequency(spec, h);
            CHECK(mf.omega_tilde == doctest::Approx(arg / h).epsilon(1e-12));
        }
    }
    CHECK(modified_frequency(leapfrog(), 1e-3).omega_tilde == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(modified_frequency(leapfrog(), 2.5), DomainError);
}

TEST_CASE("stability scan rows") {
    const auto rows = stability_scan(leapfrog(), 3.0, 0.5);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].h == 0.0);
    CHECK(rows[1].h == doctest::Approx(0.5));
    CHECK(rows[1].p == doctest::Approx(1.0 - 0.125));
    CHECK(rows[1].stable);
    CHECK_FALSE(rows.back().stable);
    CHECK_THROWS_AS(stability_scan(leapfrog(), 3.0, 0.0), ConfigurationError);
}

TEST_CASE("symplectic euler modified hamiltonian") {
    CHECK(sympl_euler_modified_hamiltonian(1.0, 0.0, 1.0) ==
          doctest::Approx(std::numbers::pi / (3.0 * std::sqrt(3.0))).epsilon(1e-15));
    CHECK(sympl_euler_modified_hamiltonian(0.6, 0.8, 0.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(sympl_euler_modified_hamiltonian(1.0, 0.0, 2.0), DomainError);

    const auto ho = harmonic_oscillator();
    const auto m = make_integrator(symplectic_euler_adjoint(), ho.system);
    const double h = 0.9;
    State x{1.0, 0.2};
    const double H0 = sympl_euler_modified_hamiltonian(x[0], x[1], h);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        x = m.step(h, x);
        worst = std::max(worst, std::abs(sympl_euler_modified_hamiltonian(x[0], x[1], h) - H0));
    }
    CHECK(worst < 1e-12 * H0);
}

TEST_CASE("verlet modified hamiltonian on the harmonic oscillator") {
    const auto ho = harmonic_oscillator();
    const double h = 0.2;
    const State x{0.4, -0.9};
    const double expected = 0.5 * (0.16 + 0.81) + h * h * (-0.81 / 24.0 + 0.16 / 12.0);
    CHECK(verlet_modified_h_correction(ho, x, h) == doctest::Approx(expected).epsilon(1e-15));

    HamiltonianProblem bare = ho;
    bare.derivatives.reset();
    CHECK_THROWS_AS(verlet_modified_h_correction(bare, x, h), ConfigurationError);
}

TEST_CASE("matrix splitting with N = 1 reproduces the stability matrix") {
    for (const auto& spec : catalog()) {
        const auto K = stability_matrix(spec, 0.3);
        const auto [q, p] = matrix_splitting_step({1.0}, 1, spec, 0.3, {0.7}, {-0.4});
        CHECK(q[0] == doctest::Approx(K.k1 * 0.7 - K.k2 * 0.4).epsilon(1e-14));
        CHECK(p[0] == doctest::Approx(K.k3 * 0.7 - K.k4 * 0.4).epsilon(1e-14));
    }
    CHECK_THROWS_AS(matrix_splitting_step({1.0, 2.0, 3.0, 4.0}, 2, leapfrog(), 0.1, {1, 1}, {1, 1}),
                    ConfigurationError);
    CHECK_THROWS_AS(matrix_splitting_step({1.0}, 2, leapfrog(), 0.1, {1, 1}, {1, 1}), ConfigurationError);
}

TEST_CASE("matrix splitting converges at fourth order against the eigen-decomposition") {
    const std::size_t N = 16;
    Eigen::MatrixXd A(N, N);
    const auto r = random_vector(N * N, -1.0, 1.0);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) A(i, j) = r[i * N + j];
    Eigen::MatrixXd H = (A * A.transpose()) / static_cast<double>(N) + Eigen::MatrixXd::Identity(N, N);
    std::vector<double> Hrow(N * N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) Hrow[i * N + j] = H(i, j);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd q0 = Eigen::VectorXd::LinSpaced(N, -1.0, 1.0);
    const Eigen::VectorXd p0 = Eigen::VectorXd::Constant(N, 0.3);
    const double T = 1.0;
    // In eigen-coordinates each mode rotates with frequency lambda_k.
    const Eigen::VectorXd qt = es.eigenvectors().transpose() * q0;
    const Eigen::VectorXd pt = es.eigenvectors().transpose() * p0;
    Eigen::VectorXd qe(N), pe(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double w = es.eigenvalues()(static_cast<long>(k)) * T;
        qe(static_cast<long>(k)) = std::cos(w) * qt(static_cast<long>(k)) + std::sin(w) * pt(static_cast<long>(k));
        pe(static_cast<long>(k)) = -std::sin(w) * qt(static_cast<long>(k)) + std::cos(w) * pt(static_cast<long>(k));
    }
    const Eigen::VectorXd q_exact = es.eigenvectors() * qe;

    auto error = [&](std::size_t n) {
        std::vector<double> q(q0.data(), q0.data() + N), p(p0.data(), p0.data() + N);
        for (std::size_t s = 0; s < n; ++s) std::tie(q, p) = matrix_splitting_step(Hrow, N, suzuki5(), T / n, q, p);
        double e = 0.0;
        for (std::size_t i = 0; i < N; ++i) e = std::max(e, std::abs(q[i] - q_exact(static_cast<long>(i))));
        return e;
    };
    CHECK(std::log2(error(40) / error(80)) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("matrix splitting on diagonal H is stable iff h lambda_max < x*") {
    const std::size_t N = 16;
    std::vector<double> H(N * N, 0.0);
    double lmax = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        H[i * N + i] = 0.2 + 0.15 * static_cast<double>(i);
        lmax = std::max(lmax, H[i * N + i]);
    }
    const double xstar = stability_threshold(leapfrog());
    auto grows = [&](double h) {
        std::vector<double> q(N, 1.0), p(N, 0.0);
        // 500 steps: long enough to see geometric growth, short enough to stay finite.
        for (int s = 0; s < 500; ++s) std::tie(q, p) = matrix_splitting_step(H, N, leapfrog(), h, q, p);
        double m = 0.0;
        for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::hypot(q[i], p[i]));
        return !(m < 1e3);
    };
    CHECK_FALSE(grows(0.95 * xstar / lmax));
    CHECK(grows(1.05 * xstar / lmax));
}
