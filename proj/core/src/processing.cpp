#include "splitting/processing.hpp"

#include "splitting/errors.hpp"
#include "splitting/order.hpp"

namespace splitting {

namespace {

void check_target(int target) {
    if (target != 4 && target != 5) throw ConfigurationError("effective order target must be 4 or 5");
}

void check_even(const std::vector<double>& v, const char* what) {
    if (v.empty() || v.size() % 2 != 0) throw ConfigurationError(std::string(what) + " must have even, nonzero length");
}

}  // namespace

Integrator inverse(const Integrator& method) {
    if (!method.is_composition())
        throw ConfigurationError("inverse of opaque integrator '" + method.label() + "' is not available");
    const auto& st = method.stage_list();
    std::vector<Stage> rev(st.rbegin(), st.rend());
    for (auto& s : rev) s.coeff = -s.coeff;
    return Integrator::composition(method.system(), std::move(rev), "inverse(" + method.label() + ")",
                                   method.nominal_order());
}

Integrator identity_map(std::shared_ptr<const SplitSystem> system) {
    return Integrator::composition(std::move(system), {}, "identity", std::nullopt);
}

ProcessedMethod processed(const Integrator& kernel, const Integrator& processor) {
    if (!processor.is_composition())
        throw ConfigurationError("processor must be a composition of part flows to be inverted exactly");
    return ProcessedMethod{kernel, processor, inverse(processor)};
}

State ProcessedMethod::propagate(const State& x0, double h, std::size_t n_steps) const {
    State y = processor_inverse.step(h, x0);
    y = splitting::propagate(kernel, y, h, n_steps);
    return processor.step(h, y);
}

Trajectory ProcessedMethod::integrate(const State& x0, double h, std::size_t n_steps,
                                      const std::vector<std::string>& record, std::size_t sample_every) const {
    Trajectory tr = splitting::integrate(kernel, processor_inverse.step(h, x0), h, n_steps, {}, sample_every);
    const SplitSystem* sys = processor.system().get();
    for (auto& x : tr.states) x = processor.step(h, x);
    for (const auto& name : record) {
        const Invariant* inv = sys ? sys->find_invariant(name) : nullptr;
        if (!inv) throw ConfigurationError("unknown invariant '" + name + "'");
        auto& series = tr.invariant_series[name];
        series.reserve(tr.states.size());
        for (const auto& x : tr.states) series.push_back(inv->value(x));
    }
    return tr;
}

Integrator ProcessedMethod::single_step() const {
    auto self = *this;
    return Integrator::opaque(
        [self](double h, const State& x) { return self.processor.step(h, self.kernel.step(h, self.processor_inverse.step(h, x))); },
        "processed(" + kernel.label() + ")", kernel.stages() + processor.stages() + processor_inverse.stages(),
        kernel.nominal_order(), kernel.evaluations_per_step());
}

Integrator processor_from_gamma(const std::vector<double>& gammas, const Integrator& basic) {
    check_even(gammas, "processor coefficients");
    return inverse(compose_adjoint_chain(gammas, basic)).with_label("processor");
}

std::map<std::string, double> effective_order_conditions(const std::vector<double>& a, int target) {
    check_target(target);
    check_even(a, "kernel coefficients");
    std::map<std::string, double> r{
        {"u1", eval_u({1}, a) - 1.0},
        {"u2", eval_u({2}, a)},
        {"u3", eval_u({3}, a)},
        {"u4", eval_u({4}, a)},
    };
    if (target == 5) {
        const double u12 = eval_u({1, 2}, a);
        r["u5"] = eval_u({5}, a);
        r["u23"] = eval_u({2, 3}, a);
        r["2u122+u14-u12^2"] = 2.0 * eval_u({1, 2, 2}, a) + eval_u({1, 4}, a) - u12 * u12;
    }
    return r;
}

std::map<std::string, double> processor_conditions(const std::vector<double>& a, const std::vector<double>& g,
                                                   int target) {
    check_target(target);
    check_even(a, "kernel coefficients");
    check_even(g, "processor coefficients");
    const double a12 = eval_u({1, 2}, a), a13 = eval_u({1, 3}, a), a112 = eval_u({1, 1, 2}, a);
    std::map<std::string, double> r{
        {"u1(g)", eval_u({1}, g)},
        {"u2(g)-u12(a)", eval_u({2}, g) - a12},
        {"u3(g)-u13(a)", eval_u({3}, g) - a13},
        {"u12(g)-u112(a)+u12(a)/2", eval_u({1, 2}, g) - (a112 - 0.5 * a12)},
    };
    if (target == 5) {
        r["u4(g)-u14(a)"] = eval_u({4}, g) - eval_u({1, 4}, a);
        r["u13(g)-u113(a)+u13(a)/2"] = eval_u({1, 3}, g) - (eval_u({1, 1, 3}, a) - 0.5 * a13);
        r["u112(g)-u1112(a)+u112(a)/2-u12(a)/12+u12(a)^2/2"] =
            eval_u({1, 1, 2}, g) - (eval_u({1, 1, 1, 2}, a) - 0.5 * a112 + a12 / 12.0 - 0.5 * a12 * a12);
    }
    return r;
}

}  // namespace splitting
