#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splitting/flows.hpp"
#include "splitting/registry.hpp"

namespace splitting {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Explicit Runge-Kutta baselines on the full field of a system, as opaque
// integrators: order 1 (explicit Euler, 1 evaluation per step), 2 (Heun, 2)
// or 4 (classical RK4, 4). ConfigurationError for other orders.
Integrator baseline_rk(int order, std::shared_ptr<const SplitSystem> system);

// "euler", "heun", "rk4", a catalog name or a spec file path.
Integrator make_method(const std::string& name, std::shared_ptr<const SplitSystem> system);

struct MethodEntry {
    std::string name;
    double h_scale = 1.0;  // this method runs with h_scale * h
};

// Observables: "energy_error" (|H - H0|), "energy_error_max" (max |H - H0|
// over the steps since the previous sample), "position_error" (Euclidean norm of
// the q-block against the reference), "state_error" (whole state),
// "radius" (|x|), "state" (one row per coordinate, observable "x<i>") and
// "invariant:<label>" (|I - I0|).
struct ExperimentConfig {
    std::string problem;
    ParameterMap parameters;
    std::vector<MethodEntry> methods;
    std::vector<double> h_grid;
    double t_end = 1.0;
    std::vector<std::string> observables{"energy_error"};
    std::size_t sample_every = 1;
    std::uint64_t seed = 0;
    bool uncertified = false;
    std::optional<State> initial_state;
};

// JSON schema:
//   { "problem": "kepler", "params": {"e": 0.2},
//     "methods": ["leapfrog", {"name": "heun", "h_scale": 2}],
//     "h": [0.1, 0.05] | "h_grid": {"start": 0.1, "ratio": 0.5, "count": 4},
//     "t_end": 6.283, "observables": ["energy_error"], "sample_every": 10,
//     "seed": 0, "uncertified": false, "initial_state": [..] }
// ValidationError naming the offending field.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct ResultRow {
    std::string method;
    double h = 0.0;
    std::size_t step = 0;
    double t = 0.0;
    std::string observable;
    double value = 0.0;
    std::string status;  // "ok" or "overflow"
};

struct ExperimentResult {
    std::vector<std::string> metadata;  // written as "# ..." lines
    std::vector<ResultRow> rows;

    // Metadata block followed by `method,h,step,t,observable,value,status`.
    void write_csv(std::ostream& out) const;
    std::vector<ResultRow> select(const std::string& method, const std::string& observable) const;
};

// Runs every (method, h) pair concurrently; rows are assembled in config
// order. Spec-defined methods must certify to their claimed order unless
// `uncertified` is set (ConfigurationError otherwise). A run that produces a
// non-finite state records one row with status "overflow" and stops.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct EfficiencyPoint {
    std::string method;
    double evaluations = 0.0;  // force evaluations per period actually used
    double error = 0.0;
    double h = 0.0;
};

enum class EfficiencyMeasure {
    AverageEnergy,     // mean |H(x(t_k)) - H0| over periods window_first..window_last
    EndpointPosition,  // position error at the end against the reference
};

struct EfficiencyOptions {
    double period = 6.283185307179586;
    std::size_t periods = 500;
    std::size_t window_first = 401;
    std::size_t window_last = 500;
    EfficiencyMeasure measure = EfficiencyMeasure::AverageEnergy;
};

// For each method and budget (force evaluations per period) the step is
// period / round(budget / evaluations_per_step); the evaluations actually
// used are reported.
std::vector<EfficiencyPoint> efficiency_curve(const RegisteredProblem& problem, const std::vector<std::string>& methods,
                                              const std::vector<double>& budgets,
                                              const EfficiencyOptions& options = {});

struct PresetCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct PresetResult {
    std::string name;
    ExperimentResult result;
    std::vector<PresetCheck> checks;

    bool passed() const;
};

// "figure1", "figure2", "figure3", "figure4-subset".
std::vector<std::string> preset_names();
PresetResult run_preset(const std::string& name);

}  // namespace splitting
