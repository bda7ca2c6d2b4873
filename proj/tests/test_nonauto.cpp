#include <cmath>

#include "doctest.h"
#include "splitting/errors.hpp"
#include "splitting/methods.hpp"
#include "splitting/nonauto.hpp"
#include "splitting/order.hpp"
#include "splitting/problems.hpp"
#include "support.hpp"

using namespace splitting;

namespace {

// q'' = -q + sin t with q(0) = 1, p(0) = 0, solved by variation of constants.
State driven_exact(double t) {
    return State{std::cos(t) + (std::sin(t) - t * std::cos(t)) / 2.0, -std::sin(t) + t * std::sin(t) / 2.0};
}

double driven_error(const Integrator& m, double T, std::size_t n) {
    const State y = propagate(m, augmented_state(State{1.0, 0.0}, 0.0), T / static_cast<double>(n), n);
    return max_abs_diff(base_state(y), driven_exact(T));
}

double driven_slope(const Integrator& m) {
    std::vector<double> hs, es;
    for (std::size_t n : {50, 100, 200, 400}) {
        hs.push_back(5.0 / static_cast<double>(n));
        es.push_back(driven_error(m, 5.0, n));
    }
    return testing_support::loglog_slope(hs, es);
}

TimeDependentPart frozen_drift() {
    return {"drift", [](const State& x, double) { return State{x[1], 0.0}; },
            [](double t, const State& x, double) { return State{x[0] + t * x[1], x[1]}; }, 0.0};
}

TimeDependentPart frozen_kick() {
    return {"kick", [](const State& x, double) { return State{0.0, -x[0]}; },
            [](double t, const State& x, double) { return State{x[0], x[1] - t * x[0]}; }, 1.0};
}

}  // namespace

TEST_CASE("augmented state layout") {
    const State y = augmented_state(State{0.3, -0.4}, 2.5);
    CHECK(y == State{0.3, -0.4, 2.5, 2.5});
    const auto [t1, t2] = time_copies(y);
    CHECK(t1 == 2.5);
    CHECK(t2 == 2.5);
    CHECK(base_state(y) == State{0.3, -0.4});
    CHECK_THROWS_AS(time_copies(State{1.0}), ConfigurationError);
    CHECK_THROWS_AS(base_state(State{}), ConfigurationError);
}

TEST_CASE("augmenting time-independent parts reproduces the autonomous method") {
    const auto sys = augment(2, frozen_drift(), frozen_kick());
    CHECK(sys->dimension == 4);
    const auto ho = harmonic_oscillator();
    const auto aug = strang(sys);
    const auto plain = strang(ho.system);
    const State x{0.7, 0.2};
    const State y = propagate(aug, augmented_state(x, 0.0), 0.1, 30);
    CHECK(max_abs_diff(base_state(y), propagate(plain, x, 0.1, 30)) < 1e-15);
}

TEST_CASE("augment requires fields and frozen-time flows") {
    auto a = frozen_drift();
    a.frozen_flow = nullptr;
    CHECK_THROWS_AS(augment(2, a, frozen_kick()), ConfigurationError);
    auto b = frozen_kick();
    b.field = nullptr;
    CHECK_THROWS_AS(augment(2, frozen_drift(), b), ConfigurationError);
}

TEST_CASE("part 0 freezes the first time copy and advances the second") {
    const auto sys = driven_oscillator();
    const State y = augmented_state(State{1.0, 0.5}, 1.0);
    const State a = sys->parts[0].flow(0.3, y);
    const auto [a1, a2] = time_copies(a);
    CHECK(a1 == 1.0);
    CHECK(a2 == doctest::Approx(1.3));
    const State b = sys->parts[1].flow(0.3, y);
    const auto [b1, b2] = time_copies(b);
    CHECK(b1 == doctest::Approx(1.3));
    CHECK(b2 == 1.0);
    // Kick with tau frozen at the second copy: p += t (-q + sin tau).
    CHECK(b[1] == doctest::Approx(0.5 + 0.3 * (-1.0 + std::sin(1.0))).epsilon(1e-15));
}

TEST_CASE("strang on the driven oscillator is second order and tracks time") {
    const auto s = strang(driven_oscillator());
    CHECK(driven_slope(s) == doctest::Approx(2.0).epsilon(0.05));
    const State y = propagate(s, augmented_state(State{1.0, 0.0}, 0.0), 0.01, 100);
    const auto [t1, t2] = time_copies(y);
    CHECK(std::abs(t1 - 1.0) <= 1e-13);
    CHECK(std::abs(t2 - 1.0) <= 1e-13);
}

TEST_CASE("time augmentation preserves the order of catalog methods") {
    const auto sys = driven_oscillator();
    CHECK(driven_slope(make_integrator(symplectic_euler(), sys)) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(driven_slope(make_integrator(leapfrog(), sys)) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(driven_slope(make_integrator(suzuki5(), sys)) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("catalog methods keep both time copies at t0 + n h") {
    const auto sys = driven_oscillator();
    for (const auto& name : catalog_names()) {
        CAPTURE(name);
        const auto m = make_integrator(catalog_spec(name), sys);
        const State y = propagate(m, augmented_state(State{1.0, 0.0}, 0.5), 0.02, 50);
        const auto [t1, t2] = time_copies(y);
        CHECK(t1 == doctest::Approx(1.5).epsilon(1e-13));
        CHECK(t2 == doctest::Approx(1.5).epsilon(1e-13));
    }
}
