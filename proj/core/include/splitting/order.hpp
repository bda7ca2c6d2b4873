#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "splitting/composition_spec.hpp"
#include "splitting/flows.hpp"

namespace splitting {

// ---- Lyndon multi-indices ----------------------------------------------------

// Finite sequence of positive integers indexing one order-condition polynomial.
struct LyndonMultiIndex {
    std::vector<int> entries;

    int weight() const noexcept;
    bool all_odd() const noexcept;
    // "u12", "u113"; entries >= 10 are written as "u(1,10)".
    std::string name() const;

    friend bool operator==(const LyndonMultiIndex&, const LyndonMultiIndex&) = default;
    friend auto operator<=>(const LyndonMultiIndex&, const LyndonMultiIndex&) = default;
};

// Every proper prefix is lexicographically smaller than the matching suffix
// (a proper prefix of a sequence compares as smaller).
bool is_lyndon(const std::vector<int>& entries);

// All Lyndon multi-indices of weight exactly n, in lexicographic order.
std::vector<LyndonMultiIndex> lyndon_multiindices(int n);

struct ConditionCounts {
    int weight = 0;
    long long general = 0;   // n_k
    long long odd_only = 0;  // m_k
};

ConditionCounts count_conditions(int n);

// Cumulative counts over odd weights 1, 3, ..., 2q-1: conditions for a
// symmetric method of order 2q (N) and for a symmetric-of-symmetric one (M).
struct SymmetricConditionTotals {
    int order = 0;
    long long general = 0;
    long long odd_only = 0;
};
std::vector<SymmetricConditionTotals> symmetric_condition_totals(int max_order);

// Number of independent order conditions of RKN splitting methods per
// weight 1..10; stored constants.
const std::vector<int>& rkn_condition_counts();

// ---- u-polynomials -----------------------------------------------------------

// u_{i_1...i_m}(alpha): sum over chains j_1 <= j_2*, ..., j_{m-1} <= j_m* of
// prod_k alpha_{j_k}^{(i_k)}, with j* = j - 1 for even j and j otherwise and
// alpha_j^{(i)} = (-1)^{j(i-1)} alpha_j^i (j counted from 1). Nested prefix
// sums, O(m s). Throws ConfigurationError on odd or empty alpha.
double eval_u(const std::vector<int>& index, const std::vector<double>& alphas);
double eval_u(const LyndonMultiIndex& index, const std::vector<double>& alphas);

enum class SymmetryAssumption {
    General,        // every Lyndon condition
    TimeSymmetric,  // palindromic alpha: odd weights only
    OddOnly,        // alpha_{2j-1} = alpha_{2j}: all-odd entries only
    Both,           // both reductions
};
std::string to_string(SymmetryAssumption assumption);
SymmetryAssumption symmetry_from_string(const std::string& text);

struct ConditionResidual {
    LyndonMultiIndex index;
    double residual = 0.0;  // u - 1 for u_1, u otherwise
};

struct OrderReport {
    int certified_order = 0;
    int max_order_checked = 0;
    SymmetryAssumption condition_set = SymmetryAssumption::General;
    double tolerance = 1e-12;
    std::vector<ConditionResidual> conditions;  // increasing weight, lexicographic
    std::map<std::string, double> residuals;     // by name
    std::optional<ConditionResidual> first_failure;
};

// Evaluates the (reduced) Lyndon condition set of weights 1..max_order.
// Symmetry assumptions are verified on alpha before they are used
// (ContractViolation otherwise); |u_1 - 1| > 1e-12 raises
// InconsistentMethodError.
OrderReport certify(const std::vector<double>& alphas, int max_order,
                    SymmetryAssumption assumption = SymmetryAssumption::General, double tol = 1e-12);
OrderReport certify(const CompositionSpec& spec, int max_order,
                    SymmetryAssumption assumption = SymmetryAssumption::General, double tol = 1e-12);

// ---- BCH polynomials -----------------------------------------------------------

struct BchSplittingCoefficients {
    double v_a = 0.0, v_b = 0.0, v_ab = 0.0, v_aba = 0.0, v_abb = 0.0;
};

// Low-order BCH coefficients of a splitting method in b-first layout
// (b has one more entry than a).
BchSplittingCoefficients bch_low_order(const std::vector<double>& a, const std::vector<double>& b);
BchSplittingCoefficients bch_low_order(const CompositionSpec& spec);

struct BchCompositionCoefficients {
    double w1 = 0.0, w2 = 0.0, w3 = 0.0;
};
// w_1 = sum alpha, w_2 = sum (-1)^i alpha_i^2, w_3 = sum alpha_i^3.
BchCompositionCoefficients w_low_order(const std::vector<double>& alphas);

// Coefficient of h^3 [Y_1, Y_2] in log of the composition, from the
// second-order BCH terms of the product of the per-stage exponentials.
double w12_bch(const std::vector<double>& alphas);

// Residuals (lhs - rhs) of the algebraic identities between the u-, w- and
// v-polynomials:
//   u11  = (u1^2 - u2)/2
//   u21  = u1 u2 - u3 - u12
//   u111 = u1^3/6 - u1 u2/2 + u3/3
//   w12  = u12 + (u3 - u1 u2)/2           (w12 from w12_bch)
//   w_n  = u_n, n = 1, 2, 3
//   v_ab = u2/2
//   v_abb = (u3 - 3 u12 + 3 u21)/12
//   v_aba = (-u3 - 3 u12 + 3 u21)/12      (v from bch_low_order(alpha_to_ab(alpha)))
//   v211 = 2 u112 - u4/2 + u2^2/2         (v211 from its double-sum definition)
std::map<std::string, double> cross_identities(const std::vector<double>& alphas);

// sum_{j2} (-1)^{j2} alpha_{j2}^2 (sum_{j1 <= j2*} alpha_{j1})^2
double v211(const std::vector<double>& alphas);

// ---- negative coefficients -----------------------------------------------------

struct NegativeCoefficientCertificate {
    std::size_t a_index = 0;  // 0-based into the canonical b-first a-list
    std::size_t b_index = 0;  // 0-based into the canonical b-first b-list
    double a_value = 0.0;
    double b_value = 0.0;
};

// For a splitting method with u_3 = 0 (order >= 3) returns one negative a
// and one negative b coefficient. PreconditionError when |u_3| > 1e-12.
NegativeCoefficientCertificate negative_coefficient_certificate(const CompositionSpec& spec);

// ---- empirical order -------------------------------------------------------------

// Reference solution: x(t) from x(0) = x0.
using ReferenceSolution = std::function<State(const State& x0, double t)>;

ReferenceSolution reference_from_flow(const FlowMap& exact_flow);
// Fine-step run of triple_jump(3) over a Strang base on `system` at step h_ref.
ReferenceSolution fine_reference(std::shared_ptr<const SplitSystem> system, double h_ref,
                                 std::size_t outer_part = 1);

struct ConvergencePoint {
    double h = 0.0;
    std::size_t steps = 0;
    double error = 0.0;
    bool excluded = false;
    std::string note;
};

struct ConvergenceStudy {
    std::vector<ConvergencePoint> points;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::vector<std::string> warnings;
};

// Least-squares slope of log(global error at t_end) against log(h). The
// step count is round(t_end / h) and the step is adjusted to hit t_end.
// Points that blow up or sit at round-off are excluded; fewer than three
// surviving points raise InconclusiveError.
ConvergenceStudy empirical_order(const Integrator& method, const ReferenceSolution& reference, const State& x0,
                                 double t_end, const std::vector<double>& h_list);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
// Least squares on (log x, log y). Throws InconclusiveError on < 2 points.
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct NearIntegrableProfile {
    double h_slope = 0.0;  // estimate of s_1 + (global-error offset) at the smallest eps
    double h_slope_ci = 0.0;
    double eps_slope = 0.0;  // leading eps power at the first h
    double eps_slope_ci = 0.0;
    // errors[i][j] for eps_list[i], h_list[j]
    std::vector<std::vector<double>> errors;
};

// Global errors at t_end of the method `spec` on the eps-split system built
// by `make_system(eps)`, measured against a fine reference of the same split.
NearIntegrableProfile near_integrable_error_profile(
    const CompositionSpec& spec, const std::function<std::shared_ptr<const SplitSystem>(double)>& make_system,
    const State& x0, double t_end, const std::vector<double>& eps_list, const std::vector<double>& h_list);

}  // namespace splitting
