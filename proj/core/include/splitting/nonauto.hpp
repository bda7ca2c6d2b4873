#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "splitting/flows.hpp"

namespace splitting {

// One summand f(x, tau) of a non-autonomous split field, with the exact flow
// of x' = f(x, tau) for frozen tau: frozen_flow(t, x, tau).
struct TimeDependentPart {
    std::string label;
    std::function<State(const State& x, double tau)> field;
    std::function<State(double t, const State& x, double tau)> frozen_flow;
    double cost = 1.0;
};

// Enlarged autonomous system on (x, x_t1, x_t2) of dimension D + 2. Part 0
// advances x with f_a at frozen tau = x_t1 and adds the duration to x_t2;
// part 1 advances x with f_b at frozen tau = x_t2 and adds the duration to
// x_t1. Any splitting method with sum a = sum b = 1 keeps both time copies
// equal to t0 + n h. ConfigurationError when a frozen-time flow is missing.
std::shared_ptr<SplitSystem> augment(std::size_t base_dimension, TimeDependentPart a, TimeDependentPart b);

// (x, t0) -> (x, t0, t0)
State augmented_state(const State& x, double t0);
// (x_t1, x_t2) of an augmented state.
std::pair<double, double> time_copies(const State& augmented);
// Drops the two time copies.
State base_state(const State& augmented);

// q'' = -q + sin t on (q, p): part 0 drift q += t p, part 1 kick
// p += t (-q + sin tau). Augmented layout (q, p, t1, t2).
std::shared_ptr<SplitSystem> driven_oscillator();

}  // namespace splitting
