#include "splitting/order.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "splitting/errors.hpp"
#include "splitting/methods.hpp"

namespace splitting {

namespace {

void require_even(const std::vector<double>& alphas, const char* who) {
    if (alphas.empty() || alphas.size() % 2 != 0)
        throw ConfigurationError(std::string(who) + ": alpha list must have non-zero even length, got " +
                                 std::to_string(alphas.size()));
}

// alpha_j^{(i)} with j counted from 1.
double signed_power(double alpha, std::size_t j, int i) {
    const double v = std::pow(alpha, i);
    return (j % 2 == 1 && i % 2 == 0) ? -v : v;
}

// j* for 1-based j.
std::size_t star(std::size_t j) { return j % 2 == 0 ? j - 1 : j; }

void compositions(int remaining, std::vector<int>& prefix, std::vector<LyndonMultiIndex>& out) {
    if (remaining == 0) {
        if (is_lyndon(prefix)) out.push_back({prefix});
        return;
    }
    for (int first = 1; first <= remaining; ++first) {
        prefix.push_back(first);
        compositions(remaining - first, prefix, out);
        prefix.pop_back();
    }
}

bool selected(const LyndonMultiIndex& idx, SymmetryAssumption a) {
    const bool odd_weight = idx.weight() % 2 == 1;
    switch (a) {
        case SymmetryAssumption::General: return true;
        case SymmetryAssumption::TimeSymmetric: return odd_weight;
        case SymmetryAssumption::OddOnly: return idx.all_odd();
        case SymmetryAssumption::Both: return odd_weight && idx.all_odd();
    }
    return true;
}

bool nearly(double x, double y) { return std::fabs(x - y) <= 1e-13 * std::max(1.0, std::max(std::fabs(x), std::fabs(y))); }

}  // namespace

// ---- Lyndon multi-indices ----------------------------------------------------

int LyndonMultiIndex::weight() const noexcept { return std::accumulate(entries.begin(), entries.end(), 0); }

bool LyndonMultiIndex::all_odd() const noexcept {
    return std::all_of(entries.begin(), entries.end(), [](int i) { return i % 2 == 1; });
}

std::string LyndonMultiIndex::name() const {
    const bool compact = std::all_of(entries.begin(), entries.end(), [](int i) { return i < 10; });
    std::ostringstream s;
    s << 'u';
    if (compact) {
        for (int i : entries) s << i;
    } else {
        s << '(';
        for (std::size_t k = 0; k < entries.size(); ++k) s << (k ? "," : "") << entries[k];
        s << ')';
    }
    return s.str();
}

bool is_lyndon(const std::vector<int>& entries) {
    if (entries.empty()) return false;
    if (std::any_of(entries.begin(), entries.end(), [](int i) { return i < 1; })) return false;
    for (std::size_t k = 1; k < entries.size(); ++k) {
        const bool prefix_smaller = std::lexicographical_compare(entries.begin(), entries.begin() + k,
                                                                 entries.begin() + k, entries.end());
        if (!prefix_smaller) return false;
    }
    return true;
}

std::vector<LyndonMultiIndex> lyndon_multiindices(int n) {
    if (n < 1) throw ConfigurationError("weight must be >= 1");
    std::vector<LyndonMultiIndex> out;
    std::vector<int> prefix;
    compositions(n, prefix, out);
    std::sort(out.begin(), out.end());
    return out;
}

ConditionCounts count_conditions(int n) {
    ConditionCounts c;
    c.weight = n;
    for (const auto& idx : lyndon_multiindices(n)) {
        ++c.general;
        if (idx.all_odd()) ++c.odd_only;
    }
    return c;
}

std::vector<SymmetricConditionTotals> symmetric_condition_totals(int max_order) {
    std::vector<SymmetricConditionTotals> rows;
    long long n_sum = 0, m_sum = 0;
    for (int order = 2; order <= max_order; order += 2) {
        const auto c = count_conditions(order - 1);
        n_sum += c.general;
        m_sum += c.odd_only;
        rows.push_back({order, n_sum, m_sum});
    }
    return rows;
}

const std::vector<int>& rkn_condition_counts() {
    static const std::vector<int> counts{1, 2, 2, 4, 5, 10, 14, 25, 39, 69};
    return counts;
}

// ---- u-polynomials -----------------------------------------------------------

double eval_u(const std::vector<int>& index, const std::vector<double>& alphas) {
    require_even(alphas, "eval_u");
    if (index.empty()) throw ConfigurationError("eval_u: empty multi-index");
    const std::size_t n = alphas.size();
    std::vector<double> cur(n + 1, 0.0), prefix(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) cur[j] = signed_power(alphas[j - 1], j, index[0]);
    for (std::size_t k = 1; k < index.size(); ++k) {
        for (std::size_t j = 1; j <= n; ++j) prefix[j] = prefix[j - 1] + cur[j];
        for (std::size_t j = 1; j <= n; ++j) cur[j] = signed_power(alphas[j - 1], j, index[k]) * prefix[star(j)];
    }
    double sum = 0.0;
    for (std::size_t j = 1; j <= n; ++j) sum += cur[j];
    return sum;
}

double eval_u(const LyndonMultiIndex& index, const std::vector<double>& alphas) {
    return eval_u(index.entries, alphas);
}

std::string to_string(SymmetryAssumption a) {
    switch (a) {
        case SymmetryAssumption::General: return "general";
        case SymmetryAssumption::TimeSymmetric: return "time_symmetric";
        case SymmetryAssumption::OddOnly: return "odd_only";
        case SymmetryAssumption::Both: return "both";
    }
    return "general";
}

SymmetryAssumption symmetry_from_string(const std::string& text) {
    if (text == "general") return SymmetryAssumption::General;
    if (text == "time_symmetric" || text == "symmetric") return SymmetryAssumption::TimeSymmetric;
    if (text == "odd_only") return SymmetryAssumption::OddOnly;
    if (text == "both") return SymmetryAssumption::Both;
    throw ConfigurationError("unknown symmetry assumption '" + text + "'");
}

OrderReport certify(const std::vector<double>& alphas, int max_order, SymmetryAssumption assumption, double tol) {
    require_even(alphas, "certify");
    if (max_order < 1) throw ConfigurationError("certify: max_order must be >= 1");
    const double u1 = eval_u(std::vector<int>{1}, alphas);
    if (std::fabs(u1 - 1.0) > 1e-12)
        throw InconsistentMethodError("sum of coefficients is " + std::to_string(u1) + ", not 1");

    const std::size_t n = alphas.size();
    if (assumption == SymmetryAssumption::TimeSymmetric || assumption == SymmetryAssumption::Both) {
        for (std::size_t j = 0; j < n / 2; ++j)
            if (!nearly(alphas[j], alphas[n - 1 - j]))
                throw ContractViolation("time-symmetry assumed but alpha is not palindromic at position " +
                                        std::to_string(j + 1));
    }
    if (assumption == SymmetryAssumption::OddOnly || assumption == SymmetryAssumption::Both) {
        for (std::size_t j = 0; j + 1 < n; j += 2)
            if (!nearly(alphas[j], alphas[j + 1]))
                throw ContractViolation("symmetric base assumed but alpha_" + std::to_string(j + 1) +
                                        " != alpha_" + std::to_string(j + 2));
    }

    OrderReport report;
    report.condition_set = assumption;
    report.tolerance = tol;
    report.max_order_checked = max_order;
    report.certified_order = 1;
    bool still_passing = true;
    for (int w = 1; w <= max_order; ++w) {
        bool weight_ok = true;
        for (const auto& idx : lyndon_multiindices(w)) {
            if (!selected(idx, assumption)) continue;
            double r = eval_u(idx, alphas);
            if (w == 1) r -= 1.0;
            report.conditions.push_back({idx, r});
            report.residuals[idx.name()] = r;
            if (std::fabs(r) > tol) {
                weight_ok = false;
                if (!report.first_failure) report.first_failure = report.conditions.back();
            }
        }
        if (w >= 2 && still_passing) {
            if (weight_ok)
                report.certified_order = w;
            else
                still_passing = false;
        }
    }
    return report;
}

OrderReport certify(const CompositionSpec& spec, int max_order, SymmetryAssumption assumption, double tol) {
    return certify(to_alpha(spec), max_order, assumption, tol);
}

// ---- BCH polynomials -----------------------------------------------------------

BchSplittingCoefficients bch_low_order(const std::vector<double>& a, const std::vector<double>& b) {
    if (b.size() != a.size() + 1)
        throw ConfigurationError("bch_low_order: b must have one more entry than a (b-first layout)");
    const std::size_t s = a.size();
    BchSplittingCoefficients v;
    v.v_a = std::accumulate(a.begin(), a.end(), 0.0);
    v.v_b = std::accumulate(b.begin(), b.end(), 0.0);

    // B_j = b_1 + ... + b_j, A_j = a_1 + ... + a_j (1-based).
    std::vector<double> B(s + 2, 0.0), A(s + 1, 0.0);
    for (std::size_t j = 1; j <= s + 1; ++j) B[j] = B[j - 1] + b[j - 1];
    for (std::size_t j = 1; j <= s; ++j) A[j] = A[j - 1] + a[j - 1];

    double sum_ba = 0.0;  // sum_{i<=j<=s} b_i a_j
    for (std::size_t j = 1; j <= s; ++j) sum_ba += B[j] * a[j - 1];
    v.v_ab = 0.5 * v.v_a * v.v_b - sum_ba;

    double sum_aba = 0.0;  // sum_{i<j<=k<=s} a_i b_j a_k
    for (std::size_t j = 1; j <= s; ++j) sum_aba += A[j - 1] * b[j - 1] * (A[s] - A[j - 1]);
    v.v_aba = 0.5 * (-v.v_a * v.v_a * v.v_b / 6.0 + sum_aba);

    double sum_bab = 0.0;  // sum_{i<=j<k<=s+1} b_i a_j b_k
    for (std::size_t j = 1; j <= s; ++j) sum_bab += B[j] * a[j - 1] * (B[s + 1] - B[j]);
    v.v_abb = 0.5 * (v.v_a * v.v_b * v.v_b / 6.0 - sum_bab);
    return v;
}

BchSplittingCoefficients bch_low_order(const CompositionSpec& spec) {
    const auto ab = canonical_bab(to_ab(spec));
    return bch_low_order(ab.a, ab.b);
}

BchCompositionCoefficients w_low_order(const std::vector<double>& alphas) {
    require_even(alphas, "w_low_order");
    BchCompositionCoefficients w;
    for (std::size_t i = 1; i <= alphas.size(); ++i) {
        const double x = alphas[i - 1];
        w.w1 += x;
        w.w2 += (i % 2 == 0 ? 1.0 : -1.0) * x * x;
        w.w3 += x * x * x;
    }
    return w;
}

double w12_bch(const std::vector<double>& alphas) {
    require_even(alphas, "w12_bch");
    // Stage j contributes alpha_j h Y_1 + alpha_j^{(2)} h^2 Y_2 + ...; the h^3
    // [Y_1, Y_2] term of the product comes from (1/2) sum_{i<j} [X_i, X_j].
    double sum1 = 0.0, sum2 = 0.0, w = 0.0;
    for (std::size_t j = 1; j <= alphas.size(); ++j) {
        const double x1 = alphas[j - 1];
        const double x2 = signed_power(alphas[j - 1], j, 2);
        w += sum1 * x2 - sum2 * x1;
        sum1 += x1;
        sum2 += x2;
    }
    return 0.5 * w;
}

double v211(const std::vector<double>& alphas) {
    require_even(alphas, "v211");
    const std::size_t n = alphas.size();
    std::vector<double> P(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) P[j] = P[j - 1] + alphas[j - 1];
    double v = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double inner = P[star(j)];
        v += signed_power(alphas[j - 1], j, 2) * inner * inner;
    }
    return v;
}

std::map<std::string, double> cross_identities(const std::vector<double>& alphas) {
    require_even(alphas, "cross_identities");
    auto u = [&](std::initializer_list<int> idx) { return eval_u(std::vector<int>(idx), alphas); };
    const double u1 = u({1}), u2 = u({2}), u3 = u({3}), u4 = u({4});
    const double u11 = u({1, 1}), u12 = u({1, 2}), u21 = u({2, 1}), u111 = u({1, 1, 1}), u112 = u({1, 1, 2});

    std::map<std::string, double> r;
    r["u11"] = u11 - 0.5 * (u1 * u1 - u2);
    r["u21"] = u21 - (u1 * u2 - u3 - u12);
    r["u111"] = u111 - (u1 * u1 * u1 / 6.0 - 0.5 * u1 * u2 + u3 / 3.0);

    const auto w = w_low_order(alphas);
    r["w1"] = w.w1 - u1;
    r["w2"] = w.w2 - u2;
    r["w3"] = w.w3 - u3;
    r["w12"] = w12_bch(alphas) - (u12 + 0.5 * (u3 - u1 * u2));

    const auto ab = canonical_bab(alpha_to_ab(alphas));
    const auto v = bch_low_order(ab.a, ab.b);
    r["v_ab"] = v.v_ab - 0.5 * u2;
    r["v_abb"] = v.v_abb - (u3 - 3.0 * u12 + 3.0 * u21) / 12.0;
    r["v_aba"] = v.v_aba - (-u3 - 3.0 * u12 + 3.0 * u21) / 12.0;
    r["v211"] = v211(alphas) - (2.0 * u112 - 0.5 * u4 + 0.5 * u2 * u2);
    return r;
}

// ---- negative coefficients -----------------------------------------------------

NegativeCoefficientCertificate negative_coefficient_certificate(const CompositionSpec& spec) {
    const CompositionSpec ab_spec = to_ab(spec);
    const auto alphas = ab_to_alpha(ab_spec).coeffs;
    const double u3 = eval_u(std::vector<int>{3}, alphas);
    if (std::fabs(u3) > 1e-12)
        throw PreconditionError("u3 = " + std::to_string(u3) + " != 0: method not actually of order >= 3");
    const auto ab = canonical_bab(ab_spec);
    const auto ia = std::min_element(ab.a.begin(), ab.a.end());
    const auto ib = std::min_element(ab.b.begin(), ab.b.end());
    if (ia == ab.a.end() || *ia >= 0.0 || ib == ab.b.end() || *ib >= 0.0)
        throw ContractViolation("u3 vanishes but no negative a and b coefficient pair exists");
    NegativeCoefficientCertificate c;
    c.a_index = static_cast<std::size_t>(ia - ab.a.begin());
    c.b_index = static_cast<std::size_t>(ib - ab.b.begin());
    c.a_value = *ia;
    c.b_value = *ib;
    return c;
}

// ---- empirical order -------------------------------------------------------------

ReferenceSolution reference_from_flow(const FlowMap& exact_flow) {
    return [exact_flow](const State& x0, double t) { return exact_flow.apply(t, x0); };
}

ReferenceSolution fine_reference(std::shared_ptr<const SplitSystem> system, double h_ref, std::size_t outer_part) {
    if (!(h_ref > 0.0)) throw ConfigurationError("reference step must be positive");
    const Integrator method = compose_symmetric_of_symmetric(triple_jump(3).coeffs, strang(system, outer_part));
    return [method, h_ref](const State& x0, double t) {
        if (t == 0.0) return x0;
        const auto n = static_cast<std::size_t>(std::ceil(std::fabs(t) / h_ref));
        return propagate(method, x0, t / static_cast<double>(n), n);
    };
}

LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigurationError("loglog_fit: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    const std::size_t n = lx.size();
    if (n < 2) throw InconclusiveError("fewer than two usable points for a log-log fit");
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw InconclusiveError("log-log fit with a single abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = ly[i] - (f.intercept + f.slope * lx[i]);
            ssr += e * e;
        }
        f.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

ConvergenceStudy empirical_order(const Integrator& method, const ReferenceSolution& reference, const State& x0,
                                 double t_end, const std::vector<double>& h_list) {
    if (h_list.size() < 3) throw ConfigurationError("empirical_order needs at least three step sizes");
    const State ref = reference(x0, t_end);
    const double floor = 1e-13 * std::max(1.0, norm2(ref));
    ConvergenceStudy study;
    std::vector<double> hs, errs;
    for (double h : h_list) {
        ConvergencePoint p;
        p.steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(std::fabs(t_end / h))));
        p.h = t_end / static_cast<double>(p.steps);
        try {
            const State x = propagate(method, x0, p.h, p.steps);
            if (!x.all_finite()) throw OverflowError("non-finite final state", {}, p.steps);
            p.error = distance(x, ref);
        } catch (const Error& e) {
            p.excluded = true;
            p.note = std::string("blow-up: ") + e.what();
            study.warnings.push_back("h=" + std::to_string(p.h) + " excluded (" + p.note + ")");
        }
        if (!p.excluded && p.error <= floor) {
            p.excluded = true;
            p.note = "round-off";
            study.warnings.push_back("h=" + std::to_string(p.h) + " excluded (error at round-off)");
        }
        if (!p.excluded) {
            hs.push_back(std::fabs(p.h));
            errs.push_back(p.error);
        }
        study.points.push_back(p);
    }
    if (hs.size() < 3) throw InconclusiveError("fewer than three usable step sizes in convergence study");
    const auto fit = loglog_fit(hs, errs);
    study.slope = fit.slope;
    study.intercept = fit.intercept;
    study.slope_stderr = fit.slope_stderr;
    return study;
}

NearIntegrableProfile near_integrable_error_profile(
    const CompositionSpec& spec, const std::function<std::shared_ptr<const SplitSystem>(double)>& make_system,
    const State& x0, double t_end, const std::vector<double>& eps_list, const std::vector<double>& h_list) {
    if (eps_list.empty() || h_list.empty()) throw ConfigurationError("empty eps or h list");
    const double h_min = *std::min_element(h_list.begin(), h_list.end());
    NearIntegrableProfile prof;
    for (double eps : eps_list) {
        const auto sys = make_system(eps);
        const Integrator method = make_integrator(spec, sys);
        const State ref = fine_reference(sys, h_min / 64.0)(x0, t_end);
        std::vector<double> row;
        for (double h : h_list) {
            const auto n = static_cast<std::size_t>(std::max<long long>(1, std::llround(t_end / h)));
            row.push_back(distance(propagate(method, x0, t_end / static_cast<double>(n), n), ref));
        }
        prof.errors.push_back(std::move(row));
    }

    const std::size_t i_small =
        static_cast<std::size_t>(std::min_element(eps_list.begin(), eps_list.end()) - eps_list.begin());
    if (h_list.size() >= 2) {
        const auto fh = loglog_fit(h_list, prof.errors[i_small]);
        prof.h_slope = fh.slope;
        prof.h_slope_ci = 2.0 * fh.slope_stderr;
    }
    if (eps_list.size() >= 2) {
        std::vector<double> col;
        for (const auto& row : prof.errors) col.push_back(row.front());
        const auto fe = loglog_fit(eps_list, col);
        prof.eps_slope = fe.slope;
        prof.eps_slope_ci = 2.0 * fe.slope_stderr;
    }
    return prof;
}

}  // namespace splitting
