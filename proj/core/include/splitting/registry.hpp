#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "splitting/flows.hpp"

namespace splitting {

using ParameterMap = std::map<std::string, double>;

// "eps=0.001,alpha=1" -> {eps: 0.001, alpha: 1}. ConfigurationError on
// malformed entries.
ParameterMap parse_parameters(const std::string& text);

// A problem resolved from the registry: the split used for integration plus
// whatever reference data the problem offers.
struct RegisteredProblem {
    std::string name;
    ParameterMap parameters;  // effective values, defaults filled in
    std::shared_ptr<const SplitSystem> system;
    std::optional<ScalarFunction> energy;
    std::optional<FlowMap> exact_flow;
    State initial_state;
    // Index of the part used as the outer part by strang() (the kick for T+V
    // splits, the perturbation for near-integrable ones).
    std::size_t outer_part = 1;
};

struct RegistryEntry {
    std::string name;
    std::string description;
    ParameterMap defaults;
};

// harmonic_oscillator, kepler{e}, perturbed_kepler{eps, alpha, e, split
// (0: T+V, 1: H0 + eps H1)}, henon_heiles, volterra_lotka, lorenz{sigma, r, b},
// abc_flow{A, B, C}, driven_oscillator{t0}.
const std::vector<RegistryEntry>& problem_registry();

// ConfigurationError for unknown names or unknown parameter keys.
RegisteredProblem make_problem(const std::string& name, const ParameterMap& parameters = {});

}  // namespace splitting
