#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "splitting/composition_spec.hpp"
#include "splitting/state.hpp"

namespace splitting {

using VectorField = std::function<State(const State&)>;
using ScalarFunction = std::function<double(const State&)>;

// Exact flow of one vector field: apply(t, x) = phi_t(x).
struct FlowMap {
    std::string label;
    std::function<State(double, const State&)> apply;

    State operator()(double t, const State& x) const { return apply(t, x); }
};

// One summand of a split vector field together with its exact flow.
// `cost` is the number of force evaluations charged per flow application.
struct Part {
    std::string label;
    VectorField field;
    FlowMap flow;
    double cost = 1.0;
};

struct Invariant {
    std::string label;
    ScalarFunction value;
};

// x' = f(x) = sum_i f_i(x) with exactly integrable summands. Auxiliary
// flows (e.g. modified-potential kicks) can be addressed by stages with flow
// index parts.size() + k; they do not contribute to full_field.
struct SplitSystem {
    std::size_t dimension = 0;
    std::vector<Part> parts;
    VectorField full_field;
    std::vector<Invariant> invariants;
    std::optional<double> perturbation_parameter;
    std::vector<Part> auxiliary;

    std::size_t flow_count() const noexcept { return parts.size() + auxiliary.size(); }
    const Part& flow_part(std::size_t index) const;
    const Invariant* find_invariant(const std::string& label) const;

    // Throws ConfigurationError when the structure is malformed.
    void validate() const;
};

// max_i |full_field(x) - sum parts(x)|, maximised over the sample states.
double field_sum_defect(const SplitSystem& system, const std::vector<State>& samples);

// Counts flow applications per flow index. Thread-safe.
class FlowCallCounter {
public:
    explicit FlowCallCounter(std::size_t flows);
    void record(std::size_t flow) noexcept { counts_[flow].fetch_add(1, std::memory_order_relaxed); }
    long long count(std::size_t flow) const noexcept { return counts_[flow].load(); }
    long long total() const noexcept;
    void reset() noexcept;

private:
    std::unique_ptr<std::atomic<long long>[]> counts_;
    std::size_t n_;
};

// Copy of `system` whose flows report every application to `counter`.
std::shared_ptr<SplitSystem> instrumented(const SplitSystem& system, std::shared_ptr<FlowCallCounter> counter);

// One flow application inside a step: flow `flow` for duration coeff * h^h_power.
struct Stage {
    std::size_t flow = 0;
    double coeff = 0.0;
    int h_power = 1;

    friend bool operator==(const Stage&, const Stage&) = default;
};

// A one-step method. Either a composition of exact part flows (supports
// adjoint, scaling, FSAL) or an opaque step function.
class Integrator {
public:
    using StepFunction = std::function<State(double, const State&)>;

    static Integrator composition(std::shared_ptr<const SplitSystem> system, std::vector<Stage> stages,
                                  std::string label, std::optional<int> nominal_order);
    static Integrator opaque(StepFunction step, std::string label, std::size_t stages,
                             std::optional<int> nominal_order, double evaluations_per_step);

    State step(double h, const State& x) const;
    State operator()(double h, const State& x) const { return step(h, x); }

    const std::string& label() const noexcept { return label_; }
    std::optional<int> nominal_order() const noexcept { return order_; }
    // Flow applications per (un-merged) step.
    std::size_t stages() const noexcept;
    // Force evaluations per step when consecutive steps are chained, i.e.
    // the last stage of a step is merged with the first stage of the next
    // one when both use the same flow.
    double evaluations_per_step() const;

    bool is_composition() const noexcept { return !opaque_; }
    const std::vector<Stage>& stage_list() const;
    const std::shared_ptr<const SplitSystem>& system() const noexcept { return system_; }

    Integrator with_label(std::string label) const;
    Integrator with_order(std::optional<int> order) const;

private:
    Integrator() = default;
    std::shared_ptr<const SplitSystem> system_;
    std::vector<Stage> stages_;
    StepFunction opaque_;
    std::string label_;
    std::optional<int> order_;
    std::size_t opaque_stages_ = 0;
    double opaque_cost_ = 0.0;
};

// Removes zero-coefficient stages and merges neighbours that use the same
// flow with the same power of h (exact by the group property).
std::vector<Stage> normalize_stages(const std::vector<Stage>& stages);

// phi^[m]_h o ... o phi^[1]_h (part 1 applied first).
Integrator lie_trotter(std::shared_ptr<const SplitSystem> system);

// psi*_h = psi_{-h}^{-1}: stages reversed; coefficients of even powers of h flip sign.
Integrator adjoint(const Integrator& method);

// Scales the step: returns the method h -> method(factor * h).
Integrator scaled(const Integrator& method, double factor);

// phi^[o]_{h/2} o phi^[i]_h o phi^[o]_{h/2} where o = outer_part (default: the
// second part, i.e. kick-drift-kick for a drift/kick split) and i the other part.
Integrator strang(std::shared_ptr<const SplitSystem> system, std::size_t outer_part = 1);

// Interleaved splitting method of a splitting-form spec; the a-coefficients
// drive part a_part and the b-coefficients part b_part.
Integrator compose_ab(const CompositionSpec& spec, std::shared_ptr<const SplitSystem> system,
                      std::size_t a_part = 0, std::size_t b_part = 1);

// chi_{alpha_2s h} o chi*_{alpha_{2s-1} h} o ... o chi_{alpha_2 h} o chi*_{alpha_1 h}.
Integrator compose_adjoint_chain(const std::vector<double>& alphas, const Integrator& basic);
Integrator compose_adjoint_chain(const CompositionSpec& alpha_spec, const Integrator& basic);

// S_{beta_s h} o ... o S_{beta_1 h} for a self-adjoint base method. The base
// is checked for self-adjointness: structurally when it is a composition,
// numerically (step(-h) o step(h) = id) at `probe` otherwise.
Integrator compose_symmetric_of_symmetric(const std::vector<double>& betas, const Integrator& base,
                                          const std::optional<State>& probe = std::nullopt);
Integrator compose_symmetric_of_symmetric(const CompositionSpec& beta_spec, const Integrator& base,
                                          const std::optional<State>& probe = std::nullopt);

// True when the composition is its own adjoint (palindromic stage list).
bool is_structurally_self_adjoint(const Integrator& method, double tol = 1e-15);

struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::map<std::string, std::vector<double>> invariant_series;
    std::vector<std::size_t> steps;
};

// Constant-step run of n_steps steps. States (and the requested invariants)
// are recorded at step 0 and every `sample_every` steps, plus the final step.
// Throws OverflowError on the first non-finite state.
Trajectory integrate(const Integrator& method, const State& x0, double h, std::size_t n_steps,
                     const std::vector<std::string>& record = {}, std::size_t sample_every = 1,
                     double t0 = 0.0);

// Final state of n_steps steps. With fsal = true, the last stage of each step
// is fused with the first stage of the next (same flow required); the result
// agrees with the un-fused run to round-off.
State propagate(const Integrator& method, const State& x0, double h, std::size_t n_steps, bool fsal = false);

}  // namespace splitting
