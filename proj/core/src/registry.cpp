#include "splitting/registry.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "splitting/errors.hpp"
#include "splitting/nonauto.hpp"
#include "splitting/problems.hpp"

namespace splitting {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

RegisteredProblem from_hamiltonian(const HamiltonianProblem& p) {
    RegisteredProblem r;
    r.system = p.system;
    r.energy = p.hamiltonian;
    r.exact_flow = p.exact_flow;
    r.initial_state = p.initial_state;
    return r;
}

}  // namespace

ParameterMap parse_parameters(const std::string& text) {
    ParameterMap out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigurationError("parameter '" + item + "' is not of the form key=value");
        const std::string key = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (key.empty() || ec != std::errc() || ptr != value.data() + value.size())
            throw ConfigurationError("parameter '" + item + "' has an invalid value");
        out[key] = v;
    }
    return out;
}

const std::vector<RegistryEntry>& problem_registry() {
    static const std::vector<RegistryEntry> entries{
        {"harmonic_oscillator", "H = (p^2 + q^2)/2, drift/kick split", {}},
        {"kepler", "two-body problem, T+V split", {{"e", 0.2}}},
        {"perturbed_kepler", "Kepler with 1/r^3 perturbation; split 0 = T+V, 1 = H0 + eps H1",
         {{"eps", 0.001}, {"alpha", 1.0}, {"e", 0.2}, {"split", 0.0}}},
        {"henon_heiles", "Henon-Heiles, T+V split", {}},
        {"volterra_lotka", "u' = u(v-2), v' = v(1-u)", {}},
        {"lorenz", "Lorenz system, linear + bilinear split", {{"sigma", 10.0}, {"r", 28.0}, {"b", 8.0 / 3.0}}},
        {"abc_flow", "ABC flow, three-part split", {{"A", 1.0}, {"B", 1.0}, {"C", 1.0}}},
        {"driven_oscillator", "q'' = -q + sin t, time-augmented", {{"t0", 0.0}}},
    };
    return entries;
}

RegisteredProblem make_problem(const std::string& name, const ParameterMap& parameters) {
    const auto& reg = problem_registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const RegistryEntry& e) { return e.name == name; });
    if (it == reg.end()) throw ConfigurationError("unknown problem '" + name + "'");
    ParameterMap p = it->defaults;
    for (const auto& [k, v] : parameters) {
        if (!p.count(k)) throw ConfigurationError("problem '" + name + "' has no parameter '" + k + "'");
        p[k] = v;
    }

    RegisteredProblem r;
    if (name == "harmonic_oscillator") {
        r = from_hamiltonian(harmonic_oscillator());
    } else if (name == "kepler") {
        r = from_hamiltonian(kepler(p["e"]));
    } else if (name == "perturbed_kepler") {
        const auto hp = perturbed_kepler(p["eps"], p["alpha"], p["e"]);
        r = from_hamiltonian(hp);
        if (p["split"] != 0.0) {
            if (p["split"] != 1.0) throw ConfigurationError("perturbed_kepler: split must be 0 or 1");
            r.system = hp.near_integrable;
        }
    } else if (name == "henon_heiles") {
        r = from_hamiltonian(henon_heiles());
    } else if (name == "volterra_lotka") {
        r.system = volterra_lotka();
        r.initial_state = State{1.0, 1.0};
    } else if (name == "lorenz") {
        r.system = lorenz(p["sigma"], p["r"], p["b"]);
        r.initial_state = State{1.0, 1.0, 1.0};
    } else if (name == "abc_flow") {
        r.system = abc_flow(p["A"], p["B"], p["C"]);
        r.initial_state = State{0.1, 0.2, 0.3};
    } else {
        r.system = driven_oscillator();
        r.initial_state = augmented_state(State{1.0, 0.0}, p["t0"]);
    }
    r.name = name;
    r.parameters = std::move(p);
    return r;
}

}  // namespace splitting
