#include "splitting/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "splitting/errors.hpp"
#include "splitting/methods.hpp"
#include "splitting/order.hpp"

namespace splitting {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_baseline(const std::string& name) {
    const auto n = lower(name);
    return n == "euler" || n == "heun" || n == "rk2" || n == "rk4";
}

double norm_range(const State& a, const State& b, std::size_t first, std::size_t last) {
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

// Reference trajectory from x0, advanced monotonically in t (exact flow when
// the problem has one, otherwise a fine high-order run).
class Reference {
public:
    Reference(const RegisteredProblem& p, const State& x0, double h_ref)
        : exact_(p.exact_flow), x0_(x0), x_(x0), h_ref_(h_ref) {
        if (!exact_)
            fine_ = compose_symmetric_of_symmetric(triple_jump(3).coeffs, strang(p.system, p.outer_part));
    }

    State at(double t) {
        if (exact_) return exact_->apply(t, x0_);
        if (t < t_) {
            t_ = 0.0;
            x_ = x0_;
        }
        const double dt = t - t_;
        if (dt > 0.0) {
            const auto n = static_cast<std::size_t>(std::ceil(dt / h_ref_));
            x_ = propagate(*fine_, x_, dt / static_cast<double>(n), n);
            t_ = t;
        }
        return x_;
    }

private:
    std::optional<FlowMap> exact_;
    std::optional<Integrator> fine_;
    State x0_, x_;
    double t_ = 0.0;
    double h_ref_;
};

bool needs_reference(const std::vector<std::string>& observables) {
    return std::any_of(observables.begin(), observables.end(),
                       [](const std::string& o) { return o == "position_error" || o == "state_error"; });
}

void check_observables(const ExperimentConfig& c, const RegisteredProblem& p) {
    for (const auto& o : c.observables) {
        if (o == "energy_error" || o == "energy_error_max" || o == "position_error") {
            if (!p.energy) throw ConfigurationError("observable '" + o + "' needs a Hamiltonian problem");
        } else if (o.rfind("invariant:", 0) == 0) {
            if (!p.system->find_invariant(o.substr(10)))
                throw ConfigurationError("problem '" + p.name + "' has no invariant '" + o.substr(10) + "'");
        } else if (o != "state_error" && o != "radius" && o != "state") {
            throw ConfigurationError("unknown observable '" + o + "'");
        }
    }
}

struct Job {
    std::size_t method_index;
    double h;
};

std::vector<ResultRow> run_job(const ExperimentConfig& c, const RegisteredProblem& p, const Integrator& method,
                               const std::string& label, double h, double h_ref) {
    std::vector<ResultRow> rows;
    const State x0 = c.initial_state ? *c.initial_state : p.initial_state;
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.t_end / h)));
    const std::size_t every = std::max<std::size_t>(1, c.sample_every);
    std::optional<Reference> ref;
    if (needs_reference(c.observables)) ref.emplace(p, x0, h_ref);
    const double H0 = p.energy ? (*p.energy)(x0) : 0.0;
    const std::size_t dof = x0.size() / 2;
    const bool track_max =
        std::find(c.observables.begin(), c.observables.end(), "energy_error_max") != c.observables.end();
    double running_max = 0.0;

    auto emit = [&](std::size_t k, const State& x) {
        const double t = static_cast<double>(k) * h;
        std::optional<State> xr;
        for (const auto& o : c.observables) {
            auto row = [&](const std::string& name, double v) { rows.push_back({label, h, k, t, name, v, "ok"}); };
            if (o == "energy_error") {
                row(o, std::abs((*p.energy)(x) - H0));
            } else if (o == "energy_error_max") {
                row(o, std::max(running_max, std::abs((*p.energy)(x) - H0)));
            } else if (o == "position_error" || o == "state_error") {
                if (!xr) xr = ref->at(t);
                row(o, o == "position_error" ? norm_range(x, *xr, 0, dof) : norm_range(x, *xr, 0, x.size()));
            } else if (o == "radius") {
                row(o, norm_range(x, State(x.size(), 0.0), 0, x.size()));
            } else if (o == "state") {
                for (std::size_t i = 0; i < x.size(); ++i) row("x" + std::to_string(i), x[i]);
            } else {
                const auto* inv = p.system->find_invariant(o.substr(10));
                row(o, std::abs(inv->value(x) - inv->value(x0)));
            }
        }
    };

    State x = x0;
    emit(0, x);
    for (std::size_t k = 1; k <= n; ++k) {
        bool ok = true;
        try {
            x = method.step(h, x);
            ok = x.all_finite();
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) {
            rows.push_back({label, h, k, static_cast<double>(k) * h, "overflow",
                            std::numeric_limits<double>::quiet_NaN(), "overflow"});
            break;
        }
        const bool sample = k % every == 0 || k == n;
        if (track_max && !sample) running_max = std::max(running_max, std::abs((*p.energy)(x) - H0));
        if (sample) {
            emit(k, x);
            running_max = 0.0;
        }
    }
    return rows;
}

void require_certified(const std::string& name, bool uncertified) {
    if (uncertified || is_baseline(name)) return;
    const CompositionSpec spec = resolve_spec(name);
    if (spec.claimed_order <= 0 || spec.form == Form::Gamma) return;
    const auto report = certify(spec, spec.claimed_order);
    if (report.certified_order < spec.claimed_order)
        throw ConfigurationError("method '" + name + "' certifies to order " + std::to_string(report.certified_order) +
                                 " but claims " + std::to_string(spec.claimed_order) + "; pass --uncertified to run it");
}

double log_slope_after(const std::vector<ResultRow>& rows, double t_min) {
    std::vector<double> t, v;
    for (const auto& r : rows)
        if (r.t >= t_min && r.status == "ok") {
            t.push_back(r.t);
            v.push_back(r.value);
        }
    return loglog_fit(t, v).slope;
}

}  // namespace

Integrator baseline_rk(int order, std::shared_ptr<const SplitSystem> system) {
    if (!system || !system->full_field) throw ConfigurationError("baseline method needs the full vector field");
    const VectorField f = system->full_field;
    switch (order) {
        case 1:
            return Integrator::opaque([f](double h, const State& x) { return x + h * f(x); }, "euler", 1, 1, 1.0);
        case 2:
            return Integrator::opaque(
                [f](double h, const State& x) {
                    const State k1 = f(x);
                    const State k2 = f(x + h * k1);
                    return x + (0.5 * h) * (k1 + k2);
                },
                "heun", 2, 2, 2.0);
        case 4:
            return Integrator::opaque(
                [f](double h, const State& x) {
                    const State k1 = f(x);
                    const State k2 = f(x + (0.5 * h) * k1);
                    const State k3 = f(x + (0.5 * h) * k2);
                    const State k4 = f(x + h * k3);
                    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                },
                "rk4", 4, 4, 4.0);
        default:
            throw ConfigurationError("baseline Runge-Kutta order must be 1, 2 or 4");
    }
}

Integrator make_method(const std::string& name, std::shared_ptr<const SplitSystem> system) {
    const auto n = lower(name);
    if (n == "euler") return baseline_rk(1, system);
    if (n == "heun" || n == "rk2") return baseline_rk(2, system);
    if (n == "rk4") return baseline_rk(4, system);
    return make_integrator(resolve_spec(name), std::move(system)).with_label(name);
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config", "top level must be an object");
    ExperimentConfig c;
    auto number = [](const json& v, const std::string& field) {
        if (!v.is_number()) throw ValidationError(field, "must be a number");
        return v.get<double>();
    };
    if (!j.contains("problem") || !j["problem"].is_string()) throw ValidationError("problem", "missing problem name");
    c.problem = j["problem"].get<std::string>();
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ValidationError("params", "must be an object");
        for (const auto& [k, v] : j["params"].items()) c.parameters[k] = number(v, "params." + k);
    }
    if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty())
        throw ValidationError("methods", "must be a non-empty list");
    for (const auto& m : j["methods"]) {
        if (m.is_string()) {
            c.methods.push_back({m.get<std::string>(), 1.0});
        } else if (m.is_object() && m.contains("name") && m["name"].is_string()) {
            MethodEntry e{m["name"].get<std::string>(), 1.0};
            if (m.contains("h_scale")) e.h_scale = number(m["h_scale"], "methods.h_scale");
            if (!(e.h_scale > 0.0)) throw ValidationError("methods.h_scale", "must be positive");
            c.methods.push_back(e);
        } else {
            throw ValidationError("methods", "entries must be names or {name, h_scale} objects");
        }
    }
    if (j.contains("h")) {
        if (!j["h"].is_array()) throw ValidationError("h", "must be a list");
        for (const auto& v : j["h"]) c.h_grid.push_back(number(v, "h"));
    } else if (j.contains("h_grid")) {
        const auto& g = j["h_grid"];
        if (!g.is_object() || !g.contains("start") || !g.contains("ratio") || !g.contains("count"))
            throw ValidationError("h_grid", "needs start, ratio and count");
        const double start = number(g["start"], "h_grid.start"), ratio = number(g["ratio"], "h_grid.ratio");
        const auto count = static_cast<int>(number(g["count"], "h_grid.count"));
        if (!(ratio > 0.0) || count < 1) throw ValidationError("h_grid", "needs ratio > 0 and count >= 1");
        for (int i = 0; i < count; ++i) c.h_grid.push_back(start * std::pow(ratio, i));
    } else {
        throw ValidationError("h", "missing step sizes (h or h_grid)");
    }
    if (c.h_grid.empty()) throw ValidationError("h", "empty step list");
    for (double h : c.h_grid)
        if (!(h > 0.0)) throw ValidationError("h", "step sizes must be strictly positive");
    if (!j.contains("t_end")) throw ValidationError("t_end", "missing end time");
    c.t_end = number(j["t_end"], "t_end");
    if (!(c.t_end > 0.0)) throw ValidationError("t_end", "must be positive");
    if (j.contains("observables")) {
        c.observables.clear();
        for (const auto& o : j["observables"]) {
            if (!o.is_string()) throw ValidationError("observables", "entries must be strings");
            c.observables.push_back(o.get<std::string>());
        }
    }
    if (j.contains("sample_every")) {
        const double s = number(j["sample_every"], "sample_every");
        if (s < 1.0) throw ValidationError("sample_every", "must be >= 1");
        c.sample_every = static_cast<std::size_t>(s);
    }
    if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(number(j["seed"], "seed"));
    if (j.contains("uncertified")) {
        if (!j["uncertified"].is_boolean()) throw ValidationError("uncertified", "must be a boolean");
        c.uncertified = j["uncertified"].get<bool>();
    }
    if (j.contains("initial_state")) {
        std::vector<double> x;
        for (const auto& v : j["initial_state"]) x.push_back(number(v, "initial_state"));
        c.initial_state = State(std::move(x));
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

void ExperimentResult::write_csv(std::ostream& out) const {
    for (const auto& m : metadata) out << "# " << m << '\n';
    out << "method,h,step,t,observable,value,status\n";
    for (const auto& r : rows)
        out << r.method << ',' << fmt(r.h) << ',' << r.step << ',' << fmt(r.t) << ',' << r.observable << ','
            << fmt(r.value) << ',' << r.status << '\n';
}

std::vector<ResultRow> ExperimentResult::select(const std::string& method, const std::string& observable) const {
    std::vector<ResultRow> out;
    for (const auto& r : rows)
        if (r.method == method && r.observable == observable) out.push_back(r);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
    const RegisteredProblem p = make_problem(c.problem, c.parameters);
    if (c.methods.empty()) throw ConfigurationError("experiment needs at least one method");
    if (c.h_grid.empty()) throw ConfigurationError("experiment needs at least one step size");
    for (double h : c.h_grid)
        if (!(h > 0.0)) throw ConfigurationError("step sizes must be strictly positive");
    if (c.initial_state && c.initial_state->size() != p.system->dimension)
        throw ConfigurationError("initial state has the wrong dimension");
    check_observables(c, p);

    std::vector<Integrator> methods;
    for (const auto& m : c.methods) {
        require_certified(m.name, c.uncertified);
        methods.push_back(make_method(m.name, p.system));
    }
    double h_min = c.h_grid.front();
    for (const auto& m : c.methods)
        for (double h : c.h_grid) h_min = std::min(h_min, h * m.h_scale);
    const double h_ref = h_min / 128.0;

    std::vector<std::future<std::vector<ResultRow>>> futures;
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (double h : c.h_grid) {
            ExperimentConfig ci = c;
            // sample_every counts steps of the unscaled grid.
            ci.sample_every = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(static_cast<double>(c.sample_every) / c.methods[i].h_scale)));
            futures.push_back(std::async(std::launch::async, [ci, &p, &methods, i, h, h_ref, scale = c.methods[i].h_scale,
                                                              label = c.methods[i].name]() {
                return run_job(ci, p, methods[i], label, h * scale, h_ref);
            }));
        }

    ExperimentResult result;
    std::ostringstream params, names, steps, obs;
    for (const auto& [k, v] : p.parameters) params << (params.tellp() > 0 ? "," : "") << k << '=' << fmt(v);
    for (const auto& m : c.methods)
        names << (names.tellp() > 0 ? "," : "") << m.name << (m.h_scale != 1.0 ? "(h_scale=" + fmt(m.h_scale) + ")" : "");
    for (double h : c.h_grid) steps << (steps.tellp() > 0 ? "," : "") << fmt(h);
    for (const auto& o : c.observables) obs << (obs.tellp() > 0 ? "," : "") << o;
    result.metadata = {std::string("splitting ") + kLibraryVersion,
                       "problem: " + c.problem,
                       "params: " + params.str(),
                       "methods: " + names.str(),
                       "h: " + steps.str(),
                       "t_end: " + fmt(c.t_end),
                       "observables: " + obs.str(),
                       "sample_every: " + std::to_string(c.sample_every),
                       "seed: " + std::to_string(c.seed)};
    for (auto& f : futures) {
        auto rows = f.get();
        result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    }
    return result;
}

std::vector<EfficiencyPoint> efficiency_curve(const RegisteredProblem& problem, const std::vector<std::string>& methods,
                                              const std::vector<double>& budgets, const EfficiencyOptions& o) {
    if (o.window_first < 1 || o.window_first > o.window_last || o.window_last > o.periods)
        throw ConfigurationError("efficiency window must satisfy 1 <= first <= last <= periods");
    if (o.measure == EfficiencyMeasure::AverageEnergy && !problem.energy)
        throw ConfigurationError("average energy error needs a Hamiltonian problem");

    struct Task {
        std::string method;
        double budget;
    };
    std::vector<Task> tasks;
    for (const auto& m : methods)
        for (double b : budgets) {
            if (!(b > 0.0)) throw ConfigurationError("budgets must be positive");
            tasks.push_back({m, b});
        }

    std::vector<std::future<EfficiencyPoint>> futures;
    for (const auto& task : tasks) {
        futures.push_back(std::async(std::launch::async, [&problem, &o, task]() {
            const Integrator method = make_method(task.method, problem.system);
            const double cost = method.evaluations_per_step();
            const auto per_period = std::max<long long>(1, std::llround(task.budget / (cost > 0.0 ? cost : 1.0)));
            const double h = o.period / static_cast<double>(per_period);
            const State x0 = problem.initial_state;
            const double H0 = problem.energy ? (*problem.energy)(x0) : 0.0;
            State x = x0;
            double acc = 0.0;
            std::size_t count = 0;
            bool blown = false;
            for (std::size_t period = 1; period <= o.periods && !blown; ++period) {
                for (long long k = 0; k < per_period; ++k) {
                    x = method.step(h, x);
                    if (!x.all_finite()) {
                        blown = true;
                        break;
                    }
                }
                if (!blown && o.measure == EfficiencyMeasure::AverageEnergy && period >= o.window_first &&
                    period <= o.window_last) {
                    acc += std::abs((*problem.energy)(x) - H0);
                    ++count;
                }
            }
            double error = std::numeric_limits<double>::infinity();
            if (!blown) {
                if (o.measure == EfficiencyMeasure::AverageEnergy) {
                    error = acc / static_cast<double>(count);
                } else {
                    Reference ref(problem, x0, h / 128.0);
                    const State xr = ref.at(o.period * static_cast<double>(o.periods));
                    error = norm_range(x, xr, 0, x.size() / 2);
                }
            }
            return EfficiencyPoint{task.method, static_cast<double>(per_period) * cost, error, h};
        }));
    }
    std::vector<EfficiencyPoint> points;
    for (auto& f : futures) points.push_back(f.get());
    return points;
}

bool PresetResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PresetCheck& c) { return c.passed; });
}

std::vector<std::string> preset_names() { return {"figure1", "figure2", "figure3", "figure4-subset"}; }

PresetResult run_preset(const std::string& name) {
    PresetResult out;
    out.name = name;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    if (name == "figure1") {
        ExperimentConfig c;
        c.problem = "harmonic_oscillator";
        c.methods = {{"euler", 1.0}, {"symplectic_euler_adjoint", 1.0}};
        c.h_grid = {0.1};
        c.t_end = 10.0;
        c.observables = {"radius", "state"};
        c.initial_state = State{4.0, 0.0};
        out.result = run_experiment(c);
        const auto euler = out.result.select("euler", "radius");
        bool grows = true;
        for (std::size_t i = 1; i < euler.size(); ++i) grows = grows && euler[i].value > euler[i - 1].value;
        out.checks.push_back({"euler radius grows monotonically", grows,
                              "final radius " + fmt(euler.back().value)});
        double lo = 1e300, hi = -1e300;
        for (const auto& r : out.result.select("symplectic_euler_adjoint", "radius")) {
            lo = std::min(lo, r.value);
            hi = std::max(hi, r.value);
        }
        out.checks.push_back({"symplectic euler radius stays in [3.6, 4.4]", lo >= 3.6 && hi <= 4.4,
                              "range [" + fmt(lo) + ", " + fmt(hi) + "]"});
    } else if (name == "figure2") {
        ExperimentConfig c;
        c.problem = "kepler";
        c.parameters = {{"e", 0.6}};
        c.methods = {{"euler", 1.0}, {"symplectic_euler", 1.0}};
        c.h_grid = {0.01};
        c.t_end = 3.0 * two_pi;
        c.observables = {"state", "energy_error", "invariant:L"};
        c.sample_every = 10;
        out.result = run_experiment(c);
        double se_max = 0.0;
        for (const auto& r : out.result.select("symplectic_euler", "energy_error")) se_max = std::max(se_max, r.value);
        const auto eu = out.result.select("euler", "energy_error");
        const double eu_final = eu.empty() ? 0.0 : eu.back().value;
        out.checks.push_back({"euler energy error exceeds the symplectic euler bound", eu_final > se_max,
                              "euler final " + fmt(eu_final) + ", symplectic max " + fmt(se_max)});
        double l_max = 0.0;
        for (const auto& r : out.result.select("symplectic_euler", "invariant:L")) l_max = std::max(l_max, r.value);
        out.checks.push_back({"symplectic euler conserves angular momentum", l_max <= 1e-11,
                              "max |dL| " + fmt(l_max)});
    } else if (name == "figure3") {
        ExperimentConfig c;
        c.problem = "kepler";
        c.parameters = {{"e", 0.2}};
        c.methods = {{"euler", 1.0}, {"symplectic_euler", 1.0}, {"leapfrog", 1.0}, {"heun", 2.0}};
        c.h_grid = {two_pi / 1500.0};
        c.t_end = 500.0 * two_pi;
        c.observables = {"energy_error_max", "position_error"};
        c.sample_every = 1500;
        out.result = run_experiment(c);
        const double t_min = 10.0 * two_pi * (1.0 - 1e-12);
        for (const std::string m : {"symplectic_euler", "leapfrog"}) {
            const double se = log_slope_after(out.result.select(m, "energy_error_max"), t_min);
            out.checks.push_back({m + " energy error does not grow", se <= 0.1, "slope " + fmt(se)});
            const double sp = log_slope_after(out.result.select(m, "position_error"), t_min);
            out.checks.push_back({m + " position error grows linearly", std::abs(sp - 1.0) <= 0.25,
                                  "slope " + fmt(sp)});
        }
        for (const std::string m : {"euler", "heun"}) {
            const double se = log_slope_after(out.result.select(m, "energy_error_max"), t_min);
            out.checks.push_back({m + " energy error grows", se >= 0.8, "slope " + fmt(se)});
        }
    } else if (name == "figure4-subset") {
        RegisteredProblem p = make_problem("perturbed_kepler", {{"eps", 0.001}, {"alpha", 1.0}, {"e", 0.2}});
        const std::vector<double> budgets{150, 300, 450, 600, 900, 1200};
        const auto points = efficiency_curve(p, {"ss34", "ss54"}, budgets);
        out.result.metadata = {std::string("splitting ") + kLibraryVersion, "problem: perturbed_kepler",
                               "params: alpha=1,e=0.2,eps=0.001", "methods: ss34,ss54",
                               "observable: average energy error over periods 401-500"};
        for (const auto& pt : points) {
            const auto steps = static_cast<std::size_t>(std::llround(500.0 * two_pi / pt.h));
            out.result.rows.push_back({pt.method, pt.h, steps, 500.0 * two_pi, "evaluations_per_period",
                                       pt.evaluations, "ok"});
            out.result.rows.push_back({pt.method, pt.h, steps, 500.0 * two_pi, "average_energy_error", pt.error,
                                       std::isfinite(pt.error) ? "ok" : "overflow"});
        }
        std::size_t wins = 0;
        std::ostringstream detail;
        for (std::size_t i = 0; i < budgets.size(); ++i) {
            const auto& a = points[i];                   // ss34
            const auto& b = points[budgets.size() + i];  // ss54
            if (b.error < a.error) ++wins;
            detail << (i ? "; " : "") << fmt(budgets[i]) << ": " << a.error << " vs " << b.error;
        }
        out.checks.push_back({"ss54 below ss34 at every budget", wins == budgets.size(), detail.str()});
    } else {
        throw ConfigurationError("unknown preset '" + name + "'");
    }
    return out;
}

}  // namespace splitting
