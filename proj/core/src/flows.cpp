#include "splitting/flows.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "splitting/errors.hpp"

namespace splitting {

namespace {

double power_of(double h, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= h;
    return r;
}

bool same_flow(const Stage& s, const Stage& t) { return s.flow == t.flow && s.h_power == t.h_power; }

}  // namespace

const Part& SplitSystem::flow_part(std::size_t index) const {
    if (index < parts.size()) return parts[index];
    if (index - parts.size() < auxiliary.size()) return auxiliary[index - parts.size()];
    throw ConfigurationError("flow index " + std::to_string(index) + " out of range");
}

const Invariant* SplitSystem::find_invariant(const std::string& label) const {
    for (const auto& inv : invariants)
        if (inv.label == label) return &inv;
    return nullptr;
}

void SplitSystem::validate() const {
    if (dimension == 0) throw ConfigurationError("split system dimension must be positive");
    if (parts.empty()) throw ConfigurationError("split system needs at least one part");
    for (const auto& p : parts)
        if (!p.flow.apply) throw ConfigurationError("part '" + p.label + "' has no exact flow");
    for (const auto& p : auxiliary)
        if (!p.flow.apply) throw ConfigurationError("auxiliary flow '" + p.label + "' has no exact flow");
}

double field_sum_defect(const SplitSystem& system, const std::vector<State>& samples) {
    if (!system.full_field) throw ConfigurationError("split system has no full field");
    double worst = 0.0;
    for (const auto& x : samples) {
        State sum(system.dimension, 0.0);
        for (const auto& p : system.parts) {
            if (!p.field) throw ConfigurationError("part '" + p.label + "' has no vector field");
            sum = sum + p.field(x);
        }
        worst = std::max(worst, max_abs_diff(sum, system.full_field(x)));
    }
    return worst;
}

FlowCallCounter::FlowCallCounter(std::size_t flows)
    : counts_(std::make_unique<std::atomic<long long>[]>(flows)), n_(flows) {
    reset();
}

long long FlowCallCounter::total() const noexcept {
    long long s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += counts_[i].load();
    return s;
}

void FlowCallCounter::reset() noexcept {
    for (std::size_t i = 0; i < n_; ++i) counts_[i].store(0);
}

std::shared_ptr<SplitSystem> instrumented(const SplitSystem& system, std::shared_ptr<FlowCallCounter> counter) {
    auto copy = std::make_shared<SplitSystem>(system);
    auto wrap = [&counter](Part& part, std::size_t index) {
        auto inner = part.flow.apply;
        part.flow.apply = [inner, counter, index](double t, const State& x) {
            counter->record(index);
            return inner(t, x);
        };
    };
    for (std::size_t i = 0; i < copy->parts.size(); ++i) wrap(copy->parts[i], i);
    for (std::size_t k = 0; k < copy->auxiliary.size(); ++k) wrap(copy->auxiliary[k], copy->parts.size() + k);
    return copy;
}

std::vector<Stage> normalize_stages(const std::vector<Stage>& stages) {
    std::vector<Stage> out;
    out.reserve(stages.size());
    for (const auto& s : stages) {
        if (s.coeff == 0.0) continue;
        if (!out.empty() && same_flow(out.back(), s)) {
            out.back().coeff += s.coeff;
            if (out.back().coeff == 0.0) out.pop_back();
        } else {
            out.push_back(s);
        }
    }
    return out;
}

Integrator Integrator::composition(std::shared_ptr<const SplitSystem> system, std::vector<Stage> stages,
                                   std::string label, std::optional<int> nominal_order) {
    if (!system) throw ConfigurationError("composition needs a split system");
    for (const auto& s : stages) {
        if (s.flow >= system->flow_count())
            throw ConfigurationError("stage refers to flow " + std::to_string(s.flow) + " which does not exist");
        if (s.h_power < 1) throw ConfigurationError("stage power of h must be >= 1");
    }
    Integrator m;
    m.system_ = std::move(system);
    m.stages_ = std::move(stages);
    m.label_ = std::move(label);
    m.order_ = nominal_order;
    return m;
}

Integrator Integrator::opaque(StepFunction step, std::string label, std::size_t stages,
                              std::optional<int> nominal_order, double evaluations_per_step) {
    if (!step) throw ConfigurationError("opaque integrator needs a step function");
    Integrator m;
    m.opaque_ = std::move(step);
    m.label_ = std::move(label);
    m.order_ = nominal_order;
    m.opaque_stages_ = stages;
    m.opaque_cost_ = evaluations_per_step;
    return m;
}

State Integrator::step(double h, const State& x) const {
    if (opaque_) return opaque_(h, x);
    State y = x;
    for (const auto& s : stages_) {
        const Part& part = system_->flow_part(s.flow);
        y = part.flow.apply(s.coeff * power_of(h, s.h_power), y);
    }
    return y;
}

std::size_t Integrator::stages() const noexcept { return opaque_ ? opaque_stages_ : stages_.size(); }

double Integrator::evaluations_per_step() const {
    if (opaque_) return opaque_cost_;
    double cost = 0.0;
    for (const auto& s : stages_) cost += system_->flow_part(s.flow).cost;
    if (stages_.size() > 1 && same_flow(stages_.front(), stages_.back()))
        cost -= system_->flow_part(stages_.front().flow).cost;
    return cost;
}

const std::vector<Stage>& Integrator::stage_list() const {
    if (opaque_) throw UnsupportedOperation("'" + label_ + "' is not a composition of part flows");
    return stages_;
}

Integrator Integrator::with_label(std::string label) const {
    Integrator m = *this;
    m.label_ = std::move(label);
    return m;
}

Integrator Integrator::with_order(std::optional<int> order) const {
    Integrator m = *this;
    m.order_ = order;
    return m;
}

Integrator lie_trotter(std::shared_ptr<const SplitSystem> system) {
    if (!system) throw ConfigurationError("lie_trotter needs a split system");
    if (system->parts.size() < 2) throw ConfigurationError("lie_trotter needs at least two parts");
    std::vector<Stage> stages;
    for (std::size_t i = 0; i < system->parts.size(); ++i) stages.push_back({i, 1.0, 1});
    return Integrator::composition(std::move(system), std::move(stages), "lie_trotter", 1);
}

Integrator adjoint(const Integrator& method) {
    if (!method.is_composition())
        throw UnsupportedOperation("adjoint of opaque integrator '" + method.label() + "' is not available");
    const auto& st = method.stage_list();
    std::vector<Stage> rev(st.rbegin(), st.rend());
    for (auto& s : rev)
        if (s.h_power % 2 == 0) s.coeff = -s.coeff;
    std::string label = method.label();
    const std::string prefix = "adjoint(";
    if (label.rfind(prefix, 0) == 0 && label.back() == ')')
        label = label.substr(prefix.size(), label.size() - prefix.size() - 1);
    else
        label = prefix + label + ")";
    return Integrator::composition(method.system(), std::move(rev), label, method.nominal_order());
}

Integrator scaled(const Integrator& method, double factor) {
    if (!method.is_composition()) {
        auto inner = method;
        return Integrator::opaque([inner, factor](double h, const State& x) { return inner.step(factor * h, x); },
                                  method.label(), method.stages(), method.nominal_order(),
                                  method.evaluations_per_step());
    }
    std::vector<Stage> st = method.stage_list();
    for (auto& s : st) s.coeff *= power_of(factor, s.h_power);
    return Integrator::composition(method.system(), normalize_stages(st), method.label(), method.nominal_order());
}

Integrator strang(std::shared_ptr<const SplitSystem> system, std::size_t outer_part) {
    if (!system) throw ConfigurationError("strang needs a split system");
    if (system->parts.size() != 2)
        throw ConfigurationError("strang needs exactly two parts, got " + std::to_string(system->parts.size()));
    if (outer_part > 1) throw ConfigurationError("outer part index must be 0 or 1");
    const std::size_t inner = 1 - outer_part;
    std::vector<Stage> st{{outer_part, 0.5, 1}, {inner, 1.0, 1}, {outer_part, 0.5, 1}};
    return Integrator::composition(std::move(system), std::move(st), "strang", 2);
}

Integrator compose_ab(const CompositionSpec& spec, std::shared_ptr<const SplitSystem> system, std::size_t a_part,
                      std::size_t b_part) {
    if (!system) throw ConfigurationError("compose_ab needs a split system");
    if (!spec.is_splitting_form()) throw ConfigurationError("compose_ab needs an AB/BA/ABA/BAB spec");
    if (a_part >= system->flow_count() || b_part >= system->flow_count())
        throw ConfigurationError("part index out of range");
    const AbCoefficients ab = canonical_bab(spec);
    std::vector<Stage> st;
    for (std::size_t j = 0; j < ab.a.size(); ++j) {
        st.push_back({b_part, ab.b[j], 1});
        st.push_back({a_part, ab.a[j], 1});
    }
    st.push_back({b_part, ab.b.back(), 1});
    std::optional<int> order;
    if (spec.claimed_order > 0) order = spec.claimed_order;
    return Integrator::composition(std::move(system), normalize_stages(st),
                                   spec.label.empty() ? "ab-composition" : spec.label, order);
}

Integrator compose_adjoint_chain(const std::vector<double>& alphas, const Integrator& basic) {
    if (alphas.size() % 2 != 0)
        throw ConfigurationError("adjoint chain needs an even number of coefficients, got " +
                                 std::to_string(alphas.size()));
    const Integrator star = adjoint(basic);  // throws for opaque methods
    std::vector<Stage> st;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        const Integrator& sub = (j % 2 == 0) ? star : basic;
        for (Stage s : sub.stage_list()) {
            s.coeff *= power_of(alphas[j], s.h_power);
            st.push_back(s);
        }
    }
    return Integrator::composition(basic.system(), normalize_stages(st), "adjoint-chain", std::nullopt);
}

Integrator compose_adjoint_chain(const CompositionSpec& alpha_spec, const Integrator& basic) {
    if (alpha_spec.form != Form::Alpha && alpha_spec.form != Form::Gamma)
        throw ConfigurationError("compose_adjoint_chain needs an ALPHA spec");
    auto m = compose_adjoint_chain(alpha_spec.coeffs, basic);
    std::optional<int> order;
    if (alpha_spec.claimed_order > 0) order = alpha_spec.claimed_order;
    return m.with_label(alpha_spec.label.empty() ? m.label() : alpha_spec.label).with_order(order);
}

bool is_structurally_self_adjoint(const Integrator& method, double tol) {
    if (!method.is_composition()) return false;
    const auto& st = method.stage_list();
    const auto adj = adjoint(method).stage_list();
    if (adj.size() != st.size()) return false;
    for (std::size_t i = 0; i < st.size(); ++i) {
        if (st[i].flow != adj[i].flow || st[i].h_power != adj[i].h_power) return false;
        if (std::fabs(st[i].coeff - adj[i].coeff) > tol * std::max(1.0, std::fabs(st[i].coeff))) return false;
    }
    return true;
}

namespace {

bool numerically_self_adjoint(const Integrator& base, const State& probe) {
    for (double h : {0.1, 0.01}) {
        const State back = base.step(-h, base.step(h, probe));
        if (max_abs_diff(back, probe) > 1e-10 * std::max(1.0, norm2(probe))) return false;
    }
    return true;
}

}  // namespace

Integrator compose_symmetric_of_symmetric(const std::vector<double>& betas, const Integrator& base,
                                          const std::optional<State>& probe) {
    if (betas.empty()) throw ConfigurationError("symmetric composition needs at least one weight");
    bool ok = false;
    if (base.is_composition() && is_structurally_self_adjoint(base)) ok = true;
    if (!ok && probe) ok = numerically_self_adjoint(base, *probe);
    if (!ok)
        throw ContractViolation("base method '" + base.label() + "' failed the self-adjointness check");
    if (!base.is_composition()) {
        auto inner = base;
        auto w = betas;
        return Integrator::opaque(
            [inner, w](double h, const State& x) {
                State y = x;
                for (double b : w) y = inner.step(b * h, y);
                return y;
            },
            "symmetric-composition", base.stages() * betas.size(), std::nullopt,
            base.evaluations_per_step() * static_cast<double>(betas.size()));
    }
    std::vector<Stage> st;
    for (double beta : betas)
        for (Stage s : base.stage_list()) {
            s.coeff *= power_of(beta, s.h_power);
            st.push_back(s);
        }
    return Integrator::composition(base.system(), normalize_stages(st), "symmetric-composition", std::nullopt);
}

Integrator compose_symmetric_of_symmetric(const CompositionSpec& beta_spec, const Integrator& base,
                                          const std::optional<State>& probe) {
    if (beta_spec.form != Form::Beta) throw ConfigurationError("compose_symmetric_of_symmetric needs a BETA spec");
    auto m = compose_symmetric_of_symmetric(beta_spec.coeffs, base, probe);
    std::optional<int> order;
    if (beta_spec.claimed_order > 0) order = beta_spec.claimed_order;
    return m.with_label(beta_spec.label.empty() ? m.label() : beta_spec.label).with_order(order);
}

Trajectory integrate(const Integrator& method, const State& x0, double h, std::size_t n_steps,
                     const std::vector<std::string>& record, std::size_t sample_every, double t0) {
    if (h == 0.0) throw ConfigurationError("step size must be nonzero");
    if (sample_every == 0) throw ConfigurationError("sample_every must be positive");
    std::vector<const Invariant*> invs;
    if (!record.empty()) {
        if (!method.system() && !record.empty())
            throw ConfigurationError("invariant recording needs an integrator bound to a split system");
        for (const auto& label : record) {
            const Invariant* inv = method.system()->find_invariant(label);
            if (!inv) throw ConfigurationError("unknown invariant '" + label + "'");
            invs.push_back(inv);
        }
    }
    if (!x0.all_finite()) throw OverflowError("initial state is not finite", x0.coords(), 0);

    Trajectory tr;
    auto sample = [&](std::size_t k, const State& x) {
        tr.steps.push_back(k);
        tr.times.push_back(t0 + static_cast<double>(k) * h);
        tr.states.push_back(x);
        for (std::size_t i = 0; i < invs.size(); ++i) tr.invariant_series[record[i]].push_back(invs[i]->value(x));
    };
    for (const auto& label : record) tr.invariant_series[label];

    State x = x0;
    sample(0, x);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        State y = method.step(h, x);
        if (!y.all_finite()) {
            std::ostringstream msg;
            msg << "non-finite state produced by '" << method.label() << "' at step " << k << " (h = " << h << ")";
            throw OverflowError(msg.str(), x.coords(), k);
        }
        x = std::move(y);
        if (k % sample_every == 0 || k == n_steps) sample(k, x);
    }
    return tr;
}

State propagate(const Integrator& method, const State& x0, double h, std::size_t n_steps, bool fsal) {
    if (n_steps == 0) return x0;
    const bool can_fuse = fsal && method.is_composition() && method.stage_list().size() >= 2 &&
                          same_flow(method.stage_list().front(), method.stage_list().back());
    if (!can_fuse) {
        State x = x0;
        for (std::size_t k = 0; k < n_steps; ++k) x = method.step(h, x);
        return x;
    }
    const auto& st = method.stage_list();
    const auto& sys = *method.system();
    auto apply = [&](const Stage& s, double c, const State& x) {
        return sys.flow_part(s.flow).flow.apply(c * power_of(h, s.h_power), x);
    };
    State x = apply(st.front(), st.front().coeff, x0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        for (std::size_t i = 1; i + 1 < st.size(); ++i) x = apply(st[i], st[i].coeff, x);
        const double c = st.back().coeff + (k + 1 < n_steps ? st.front().coeff : 0.0);
        x = apply(st.back(), c, x);
    }
    return x;
}

}  // namespace splitting
