#include "splitting/composition_spec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "splitting/errors.hpp"

namespace splitting {

std::string to_string(Form form) {
    switch (form) {
        case Form::AB: return "AB";
        case Form::BA: return "BA";
        case Form::ABA: return "ABA";
        case Form::BAB: return "BAB";
        case Form::Alpha: return "ALPHA";
        case Form::Beta: return "BETA";
        case Form::Gamma: return "GAMMA";
    }
    return "?";
}

Form form_from_string(const std::string& text) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (t == "AB") return Form::AB;
    if (t == "BA") return Form::BA;
    if (t == "ABA") return Form::ABA;
    if (t == "BAB") return Form::BAB;
    if (t == "ALPHA") return Form::Alpha;
    if (t == "BETA") return Form::Beta;
    if (t == "GAMMA" || t == "GAMMA_PROCESSOR") return Form::Gamma;
    throw ValidationError("form", "unknown form '" + text + "'");
}

AbCoefficients canonical_bab(const CompositionSpec& spec) {
    const auto& a = spec.a;
    const auto& b = spec.b;
    AbCoefficients out;
    switch (spec.form) {
        case Form::BAB:
            if (b.size() != a.size() + 1)
                throw ConfigurationError("BAB form needs len(b) = len(a) + 1");
            out.a = a;
            out.b = b;
            break;
        case Form::ABA:
            if (a.size() != b.size() + 1)
                throw ConfigurationError("ABA form needs len(a) = len(b) + 1");
            out.a = a;
            out.b.push_back(0.0);
            out.b.insert(out.b.end(), b.begin(), b.end());
            out.b.push_back(0.0);
            break;
        case Form::AB:
            if (a.size() != b.size() || a.empty()) throw ConfigurationError("AB form needs len(a) = len(b) >= 1");
            out.a = a;
            out.b.push_back(0.0);
            out.b.insert(out.b.end(), b.begin(), b.end());
            break;
        case Form::BA:
            if (a.size() != b.size() || a.empty()) throw ConfigurationError("BA form needs len(a) = len(b) >= 1");
            out.a = a;
            out.b = b;
            out.b.push_back(0.0);
            break;
        default: throw ConfigurationError("spec of form " + to_string(spec.form) + " has no a/b coefficients");
    }
    return out;
}

namespace {

double abs_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

bool palindromic(const std::vector<double>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n / 2; ++i)
        if (std::fabs(v[i] - v[n - 1 - i]) > 1e-14 * std::max(1.0, std::fabs(v[i]))) return false;
    return true;
}

void check_finite(const std::vector<double>& v, const std::string& field) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i])) throw ValidationError(field, "entry " + std::to_string(i) + " is not finite");
}

void check_sum(const std::vector<double>& v, double target, const std::string& field) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    const double tol = 1e-14 * std::max(1.0, abs_sum(v));
    if (std::fabs(s - target) > tol)
        throw ValidationError(field, "coefficients sum to " + std::to_string(s) + ", expected " +
                                         std::to_string(target));
}

}  // namespace

void validate(const CompositionSpec& spec) {
    if (spec.claimed_order < 0) throw ValidationError("claimed_order", "must be non-negative");
    check_finite(spec.a, "a");
    check_finite(spec.b, "b");
    check_finite(spec.coeffs, "coefficients");
    if (spec.is_splitting_form()) {
        if (!spec.coeffs.empty()) throw ValidationError("coefficients", "splitting forms use the a/b lists");
        const std::size_t na = spec.a.size(), nb = spec.b.size();
        switch (spec.form) {
            case Form::AB:
            case Form::BA:
                if (na != nb || na == 0) throw ValidationError("b", "AB/BA form needs len(a) = len(b) >= 1");
                break;
            case Form::ABA:
                if (na != nb + 1) throw ValidationError("a", "ABA form needs len(a) = len(b) + 1");
                break;
            case Form::BAB:
                if (nb != na + 1) throw ValidationError("b", "BAB form needs len(b) = len(a) + 1");
                break;
            default: break;
        }
        if (spec.symmetric) {
            const auto ab = canonical_bab(spec);
            if (!palindromic(ab.a)) throw ValidationError("a", "symmetric flag set but a is not palindromic");
            if (!palindromic(ab.b)) throw ValidationError("b", "symmetric flag set but b is not palindromic");
        }
        if (spec.claimed_order >= 1) {
            check_sum(spec.a, 1.0, "a");
            check_sum(spec.b, 1.0, "b");
        }
        return;
    }
    if (!spec.a.empty() || !spec.b.empty())
        throw ValidationError("a", "form " + to_string(spec.form) + " uses a single coefficient list");
    const std::string field = spec.form == Form::Alpha ? "alpha" : spec.form == Form::Beta ? "beta" : "gamma";
    if (spec.coeffs.empty()) throw ValidationError(field, "coefficient list is empty");
    if ((spec.form == Form::Alpha || spec.form == Form::Gamma) && spec.coeffs.size() % 2 != 0)
        throw ValidationError(field, "needs an even number of coefficients");
    if (spec.symmetric && !palindromic(spec.coeffs))
        throw ValidationError(field, "symmetric flag set but coefficients are not palindromic");
    if (spec.claimed_order >= 1 && spec.form != Form::Gamma) check_sum(spec.coeffs, 1.0, field);
}

}  // namespace splitting
