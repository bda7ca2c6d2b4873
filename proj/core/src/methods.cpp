#include "splitting/methods.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "splitting/errors.hpp"

namespace splitting {

namespace {

CompositionSpec make_bab(std::vector<double> a, std::vector<double> b, int order, bool symmetric, std::string label,
                         std::string provenance) {
    CompositionSpec s;
    s.form = Form::BAB;
    s.a = std::move(a);
    s.b = std::move(b);
    s.claimed_order = order;
    s.symmetric = symmetric;
    s.label = std::move(label);
    s.provenance = std::move(provenance);
    return s;
}

CompositionSpec make_list(Form form, std::vector<double> c, int order, bool symmetric, std::string label,
                          std::string provenance) {
    CompositionSpec s;
    s.form = form;
    s.coeffs = std::move(c);
    s.claimed_order = order;
    s.symmetric = symmetric;
    s.label = std::move(label);
    s.provenance = std::move(provenance);
    return s;
}

bool is_palindrome(const std::vector<double>& v, double tol = 1e-15) {
    for (std::size_t i = 0; i < v.size() / 2; ++i)
        if (std::fabs(v[i] - v[v.size() - 1 - i]) > tol * std::max(1.0, std::fabs(v[i]))) return false;
    return true;
}

}  // namespace

CompositionSpec symplectic_euler() {
    return make_bab({1.0}, {1.0, 0.0}, 1, false, "symplectic_euler", "closed form: kick then drift");
}

CompositionSpec symplectic_euler_adjoint() {
    return make_bab({1.0}, {0.0, 1.0}, 1, false, "symplectic_euler_adjoint", "closed form: drift then kick");
}

CompositionSpec leapfrog() {
    return make_bab({1.0}, {0.5, 0.5}, 2, true, "leapfrog", "closed form: kick-drift-kick");
}

CompositionSpec triple_jump(int k) {
    if (k < 1) throw ConfigurationError("triple_jump needs k >= 1");
    std::vector<double> w{1.0};
    for (int level = 1; level < k; ++level) {
        const double alpha = 1.0 / (2.0 - std::pow(2.0, 1.0 / (2.0 * level + 1.0)));
        const double beta = 1.0 - 2.0 * alpha;
        std::vector<double> next;
        next.reserve(3 * w.size());
        for (double x : w) next.push_back(alpha * x);
        for (double x : w) next.push_back(beta * x);
        for (double x : w) next.push_back(alpha * x);
        w = std::move(next);
    }
    return make_list(Form::Beta, std::move(w), 2 * k, true, "triple_jump_" + std::to_string(2 * k),
                     "closed form: recursive triple jump");
}

CompositionSpec suzuki5() {
    const double a = 1.0 / (4.0 - std::cbrt(4.0));
    const double b = 1.0 - 4.0 * a;
    return make_list(Form::Beta, {a, a, b, a, a}, 4, true, "suzuki5", "closed form: five-stage composition");
}

std::vector<std::string> catalog_names() {
    return {"symplectic_euler", "symplectic_euler_adjoint", "leapfrog", "triple_jump_4", "triple_jump_6", "suzuki5"};
}

CompositionSpec catalog_spec(const std::string& name) {
    if (name == "symplectic_euler") return symplectic_euler();
    if (name == "symplectic_euler_adjoint") return symplectic_euler_adjoint();
    if (name == "leapfrog" || name == "strang" || name == "ss12") return leapfrog();
    if (name == "triple_jump_4" || name == "ss34") return triple_jump(2);
    if (name == "triple_jump_6") return triple_jump(3);
    if (name == "suzuki5" || name == "ss54") return suzuki5();
    const std::string prefix = "triple_jump:";
    if (name.rfind(prefix, 0) == 0) {
        const int k = std::stoi(name.substr(prefix.size()));
        return triple_jump(k);
    }
    throw ConfigurationError("unknown catalog method '" + name + "'");
}

std::vector<double> ModifiedPotentialScheme::coefficients() const {
    std::vector<double> c;
    for (const auto& s : stages) c.push_back(s.coeff);
    return c;
}

double ModifiedPotentialScheme::sum(FlowKind kind) const {
    double s = 0.0;
    for (const auto& st : stages)
        if (st.kind == kind) s += st.coeff;
    return s;
}

ModifiedPotentialScheme chin_abb() {
    ModifiedPotentialScheme m;
    m.label = "chin_abb";
    m.claimed_order = 4;
    m.stages = {{FlowKind::B, 1.0 / 6.0, 1},  {FlowKind::A, 0.5, 1},         {FlowKind::B, 1.0 / 3.0, 1},
                {FlowKind::ModifiedB, -1.0 / 72.0, 3}, {FlowKind::B, 1.0 / 3.0, 1}, {FlowKind::A, 0.5, 1},
                {FlowKind::B, 1.0 / 6.0, 1}};
    return m;
}

Integrator compose_modified_potential(const ModifiedPotentialScheme& scheme, std::shared_ptr<const SplitSystem> system,
                                      std::size_t a_part, std::size_t b_part, std::size_t abb_flow) {
    if (!system) throw ConfigurationError("modified-potential scheme needs a split system");
    if (abb_flow == static_cast<std::size_t>(-1)) abb_flow = system->parts.size();
    bool needs_abb = false;
    for (const auto& s : scheme.stages) needs_abb = needs_abb || s.kind == FlowKind::ModifiedB;
    if (needs_abb && abb_flow >= system->flow_count())
        throw ConfigurationError("system has no modified-potential flow");
    std::vector<Stage> st;
    for (const auto& s : scheme.stages) {
        const std::size_t flow = s.kind == FlowKind::A ? a_part : s.kind == FlowKind::B ? b_part : abb_flow;
        st.push_back({flow, s.coeff, s.h_power});
    }
    std::optional<int> order;
    if (scheme.claimed_order > 0) order = scheme.claimed_order;
    // B and modified-B kicks commute but are kept as separate stages so each
    // flow application is visible to cost accounting.
    return Integrator::composition(std::move(system), normalize_stages(st), scheme.label, order);
}

CompositionSpec ab_to_alpha(const CompositionSpec& spec) {
    if (!spec.is_splitting_form()) throw ConversionError("ab_to_alpha needs a splitting-form spec");
    const AbCoefficients ab = canonical_bab(spec);
    const double sa = std::accumulate(ab.a.begin(), ab.a.end(), 0.0);
    const double sb = std::accumulate(ab.b.begin(), ab.b.end(), 0.0);
    double scale = 1.0;
    for (double x : ab.a) scale += std::fabs(x);
    for (double x : ab.b) scale += std::fabs(x);
    if (std::fabs(sa - sb) > 1e-14 * scale)
        throw ConversionError("sum of a (" + std::to_string(sa) + ") differs from sum of b (" + std::to_string(sb) +
                              "); no alpha form exists");
    const std::size_t s = ab.a.size();
    std::vector<double> alpha(2 * s);
    alpha[0] = ab.b[0];
    for (std::size_t j = 0; j < s; ++j) {
        alpha[2 * j + 1] = ab.a[j] - alpha[2 * j];
        if (2 * j + 2 < 2 * s) alpha[2 * j + 2] = ab.b[j + 1] - alpha[2 * j + 1];
    }
    CompositionSpec out = make_list(Form::Alpha, std::move(alpha), spec.claimed_order, false, spec.label,
                                    spec.provenance);
    out.symmetric = spec.symmetric && is_palindrome(out.coeffs, 1e-12);
    return out;
}

CompositionSpec alpha_to_ab(const std::vector<double>& alphas) {
    if (alphas.size() % 2 != 0 || alphas.empty())
        throw ConfigurationError("alpha_to_ab needs a non-empty even-length coefficient list");
    const std::size_t s = alphas.size() / 2;
    std::vector<double> a(s), b(s + 1);
    b[0] = alphas[0];
    for (std::size_t j = 0; j < s; ++j) {
        a[j] = alphas[2 * j] + alphas[2 * j + 1];
        const double next = (2 * j + 2 < alphas.size()) ? alphas[2 * j + 2] : 0.0;
        b[j + 1] = alphas[2 * j + 1] + next;
    }
    return make_bab(std::move(a), std::move(b), 0, false, "", "");
}

CompositionSpec alpha_to_ab(const CompositionSpec& alpha_spec) {
    if (alpha_spec.form != Form::Alpha) throw ConfigurationError("alpha_to_ab needs an ALPHA spec");
    CompositionSpec out = alpha_to_ab(alpha_spec.coeffs);
    out.claimed_order = alpha_spec.claimed_order;
    out.label = alpha_spec.label;
    out.provenance = alpha_spec.provenance;
    const auto ab = canonical_bab(out);
    out.symmetric = alpha_spec.symmetric && is_palindrome(ab.a, 1e-12) && is_palindrome(ab.b, 1e-12);
    return out;
}

CompositionSpec beta_to_alpha(const std::vector<double>& betas) {
    std::vector<double> alpha;
    alpha.reserve(2 * betas.size());
    for (double b : betas) {
        alpha.push_back(0.5 * b);
        alpha.push_back(0.5 * b);
    }
    return make_list(Form::Alpha, std::move(alpha), 0, false, "", "");
}

CompositionSpec beta_to_alpha(const CompositionSpec& beta_spec) {
    if (beta_spec.form != Form::Beta) throw ConfigurationError("beta_to_alpha needs a BETA spec");
    CompositionSpec out = beta_to_alpha(beta_spec.coeffs);
    out.claimed_order = beta_spec.claimed_order;
    out.symmetric = beta_spec.symmetric;
    out.label = beta_spec.label;
    out.provenance = beta_spec.provenance;
    return out;
}

std::vector<double> to_alpha(const CompositionSpec& spec) {
    switch (spec.form) {
        case Form::Alpha:
        case Form::Gamma: return spec.coeffs;
        case Form::Beta: return beta_to_alpha(spec.coeffs).coeffs;
        default: return ab_to_alpha(spec).coeffs;
    }
}

CompositionSpec to_ab(const CompositionSpec& spec) {
    if (spec.form == Form::Gamma) throw ConversionError("GAMMA specs describe processors, not methods");
    if (spec.is_splitting_form()) {
        const auto ab = canonical_bab(spec);
        CompositionSpec out = spec;
        out.form = Form::BAB;
        out.a = ab.a;
        out.b = ab.b;
        return out;
    }
    CompositionSpec alpha = spec.form == Form::Beta ? beta_to_alpha(spec) : spec;
    return alpha_to_ab(alpha);
}

Integrator make_integrator(const CompositionSpec& spec, std::shared_ptr<const SplitSystem> system) {
    switch (spec.form) {
        case Form::Alpha: {
            auto m = compose_adjoint_chain(spec, lie_trotter(system));
            return m;
        }
        case Form::Beta: return compose_symmetric_of_symmetric(spec, strang(system));
        case Form::Gamma: throw ConfigurationError("a GAMMA spec is a processor; use the processing module");
        default: return compose_ab(spec, std::move(system));
    }
}

// ---- serialization -----------------------------------------------------------

namespace {

std::string exact_decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json number_list(const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : v) arr.push_back(exact_decimal(x));
    return arr;
}

std::vector<double> parse_list(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        if (e.is_number()) {
            out.push_back(e.get<double>());
        } else if (e.is_string()) {
            const std::string s = e.get<std::string>();
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (s.empty() || end != s.c_str() + s.size())
                throw ValidationError(field, "entry " + std::to_string(i) + " ('" + s + "') is not a number");
            out.push_back(v);
        } else {
            throw ValidationError(field, "entry " + std::to_string(i) + " is not a number");
        }
    }
    return out;
}

}  // namespace

std::string spec_to_json(const CompositionSpec& spec) {
    nlohmann::ordered_json j;
    j["form"] = to_string(spec.form);
    switch (spec.form) {
        case Form::Alpha: j["alpha"] = number_list(spec.coeffs); break;
        case Form::Beta: j["beta"] = number_list(spec.coeffs); break;
        case Form::Gamma: j["gamma"] = number_list(spec.coeffs); break;
        default:
            j["a"] = number_list(spec.a);
            j["b"] = number_list(spec.b);
    }
    j["claimed_order"] = spec.claimed_order;
    j["symmetric"] = spec.symmetric;
    j["label"] = spec.label;
    j["provenance"] = spec.provenance;
    return j.dump(2);
}

CompositionSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("", std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("", "method spec must be a JSON object");
    if (!j.contains("form") || !j["form"].is_string()) throw ValidationError("form", "missing or not a string");
    CompositionSpec s;
    s.form = form_from_string(j["form"].get<std::string>());
    if (s.is_splitting_form()) {
        if (!j.contains("a")) throw ValidationError("a", "missing");
        if (!j.contains("b")) throw ValidationError("b", "missing");
        s.a = parse_list(j["a"], "a");
        s.b = parse_list(j["b"], "b");
    } else {
        const std::string key = s.form == Form::Alpha ? "alpha" : s.form == Form::Beta ? "beta" : "gamma";
        if (!j.contains(key)) throw ValidationError(key, "missing");
        s.coeffs = parse_list(j[key], key);
    }
    if (j.contains("claimed_order")) {
        if (!j["claimed_order"].is_number_integer()) throw ValidationError("claimed_order", "must be an integer");
        s.claimed_order = j["claimed_order"].get<int>();
    }
    if (j.contains("symmetric")) {
        if (!j["symmetric"].is_boolean()) throw ValidationError("symmetric", "must be a boolean");
        s.symmetric = j["symmetric"].get<bool>();
    }
    if (j.contains("label")) s.label = j["label"].get<std::string>();
    if (j.contains("provenance")) s.provenance = j["provenance"].get<std::string>();
    validate(s);
    return s;
}

void save_spec(const CompositionSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write '" + path.string() + "'");
    out << spec_to_json(spec) << '\n';
}

CompositionSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("", "cannot open '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return spec_from_json(buf.str());
}

CompositionSpec resolve_spec(const std::string& name_or_path) {
    if (std::filesystem::exists(name_or_path)) return load_spec(name_or_path);
    return catalog_spec(name_or_path);
}

}  // namespace splitting
