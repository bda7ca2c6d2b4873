#include "splitting/nonauto.hpp"

#include <cmath>

#include "splitting/errors.hpp"

namespace splitting {

namespace {

Part augmented_part(std::size_t D, TimeDependentPart p, std::size_t frozen, std::size_t advanced) {
    const auto field = p.field;
    const auto flow = p.frozen_flow;
    Part out;
    out.label = p.label;
    out.cost = p.cost;
    out.field = [D, field, frozen, advanced](const State& y) {
        const State x(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(D)));
        const State f = field(x, y[D + frozen]);
        State r(D + 2);
        for (std::size_t i = 0; i < D; ++i) r[i] = f[i];
        r[D + advanced] = 1.0;
        return r;
    };
    out.flow = FlowMap{p.label, [D, flow, frozen, advanced](double t, const State& y) {
                           const State x(std::vector<double>(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(D)));
                           const State fx = flow(t, x, y[D + frozen]);
                           State r = y;
                           for (std::size_t i = 0; i < D; ++i) r[i] = fx[i];
                           r[D + advanced] += t;
                           return r;
                       }};
    return out;
}

}  // namespace

std::shared_ptr<SplitSystem> augment(std::size_t D, TimeDependentPart a, TimeDependentPart b) {
    if (!a.frozen_flow || !b.frozen_flow) throw ConfigurationError("augment: both frozen-time flows are required");
    if (!a.field || !b.field) throw ConfigurationError("augment: both part fields are required");
    auto sys = std::make_shared<SplitSystem>();
    sys->dimension = D + 2;
    sys->parts.push_back(augmented_part(D, std::move(a), 0, 1));
    sys->parts.push_back(augmented_part(D, std::move(b), 1, 0));
    const auto fa = sys->parts[0].field, fb = sys->parts[1].field;
    // On the diagonal x_t1 = x_t2 = t this is (f(x, t), 1, 1).
    sys->full_field = [fa, fb](const State& y) { return fa(y) + fb(y); };
    sys->validate();
    return sys;
}

State augmented_state(const State& x, double t0) {
    State y(x.size() + 2);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i];
    y[x.size()] = t0;
    y[x.size() + 1] = t0;
    return y;
}

std::pair<double, double> time_copies(const State& y) {
    if (y.size() < 2) throw ConfigurationError("time_copies: state is not augmented");
    return {y[y.size() - 2], y[y.size() - 1]};
}

State base_state(const State& y) {
    if (y.size() < 2) throw ConfigurationError("base_state: state is not augmented");
    return State(std::vector<double>(y.begin(), y.end() - 2));
}

std::shared_ptr<SplitSystem> driven_oscillator() {
    TimeDependentPart drift{"drift", [](const State& x, double) { return State{x[1], 0.0}; },
                            [](double t, const State& x, double) { return State{x[0] + t * x[1], x[1]}; }, 0.0};
    TimeDependentPart kick{"kick", [](const State& x, double tau) { return State{0.0, -x[0] + std::sin(tau)}; },
                           [](double t, const State& x, double tau) {
                               return State{x[0], x[1] + t * (-x[0] + std::sin(tau))};
                           },
                           1.0};
    return augment(2, std::move(drift), std::move(kick));
}

}  // namespace splitting
