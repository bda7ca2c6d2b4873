#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "splitting/flows.hpp"

namespace splitting {

using Vec = std::vector<double>;
// y -> d x d matrix, row-major.
using MatrixField = std::function<Vec(const Vec&)>;
using PositionField = std::function<Vec(const Vec&)>;

// First and second derivatives of a separable H = T(p) + V(q); used by
// backward error analysis. Second derivatives are d x d, row-major.
struct SeparableDerivatives {
    PositionField T_p;
    MatrixField T_pp;
    PositionField V_q;
    MatrixField V_qq;
};

// Second-order system y'' = g(y) in phase space (y_1..y_d, v_1..v_d), split
// into drift (y += t v) and kick (v += t g(y)). When the Jacobian of g is
// supplied, auxiliary flow 0 (flow index 2) is the exact flow of the nested
// commutator [[F_a, F_b], F_b] = (0, -g3(y)), g3 = 2 g'(y) g(y), with the
// bracket taken in the same operator convention as the order conditions;
// stages use duration c h^3.
struct RknProblem {
    std::size_t d = 0;
    PositionField g;
    std::optional<MatrixField> g_jacobian;
    std::shared_ptr<SplitSystem> system;

    bool has_modified_flow() const noexcept { return g_jacobian.has_value(); }
    std::size_t modified_flow_index() const;  // ConfigurationError when absent
};

RknProblem rkn_problem(std::size_t d, PositionField g, std::optional<MatrixField> g_jacobian = std::nullopt);

// 2 g'(y) g(y)
Vec modified_force(const RknProblem& problem, const Vec& y);

// Hamiltonian problem in canonical layout (q_1..q_d, p_1..p_d). `system`
// is the T+V split: part 0 drift (kinetic), part 1 kick (potential).
struct HamiltonianProblem {
    std::string name;
    std::size_t dof = 0;
    std::shared_ptr<SplitSystem> system;
    ScalarFunction hamiltonian;
    std::optional<FlowMap> exact_flow;
    std::optional<SeparableDerivatives> derivatives;
    // H_0 + eps H_1 split (part 0: exact H_0 flow, part 1: eps-kick); only
    // for near-integrable problems.
    std::shared_ptr<SplitSystem> near_integrable;
    State initial_state;
};

// Vector field J grad H, computed by central differences (step `fd`).
State hamiltonian_field_fd(const HamiltonianProblem& problem, const State& x, double fd = 1e-6);

// H = (p^2 + q^2)/2, parts A = drift, B = kick; exact flow is a rotation.
HamiltonianProblem harmonic_oscillator();

// H = |p|^2/2 - 1/r, invariants H and L = q1 p2 - q2 p1; exact flow via
// kepler_exact_flow. Initial state from the eccentricity e.
HamiltonianProblem kepler(double e = 0.2);
State kepler_initial_state(double e);
double kepler_energy(const State& x);
double kepler_angular_momentum(const State& x);

// Exact Keplerian propagation (mu = 1) of an elliptic state for time t,
// through Kepler's equation in eccentric-anomaly form solved by safeguarded
// Newton iteration (tolerance 1e-14, at most 50 iterations).
// UnsupportedOrbitError if H >= 0, SingularityError at r = 0, NumericError
// when Newton fails.
State kepler_exact_flow(const State& x, double t);
FlowMap kepler_flow();

// H = |p|^2/2 - 1/r - eps/(2 r^3) (1 - 3 alpha q1^2 / r^2). Provides the T+V
// split and the H_0 + eps H_1 split. The near-integrable split carries an
// auxiliary flow (index 2): the nested-commutator kick v -= t grad|eps grad H_1|^2
// written with the C, D polynomials, for use with h^3-scaled stages.
HamiltonianProblem perturbed_kepler(double eps, double alpha = 1.0, double e = 0.2);

// grad H_1 (without eps).
Vec perturbation_gradient(const Vec& q, double alpha);

// The map p_i += h eps (b A_i / r^7 - h^2 eps c C_i / r^14) q_i with the A, B,
// C, D polynomials; apply(h, x). Reduces to the plain eps H_1 kick at c = 0,
// and equals kick(b h) o commutator-kick(-c h^3) of the near-integrable split.
FlowMap perturbed_kepler_modified_kick(double eps, double alpha, double b, double c);

// H = (p1^2 + p2^2)/2 + (q1^2 + q2^2)/2 + q1^2 q2 - q2^3/3.
HamiltonianProblem henon_heiles();

// u' = u(v - 2), v' = v(1 - u), split into the two displayed fields (each
// freezes one variable). Invariant "I" = log u - u + 2 log v - v.
std::shared_ptr<SplitSystem> volterra_lotka();
double volterra_lotka_invariant(const State& x);

// Lorenz split into the linear part (constant matrix, exact exponential) and
// the bilinear part (rotation of (y, z) by angle x t).
std::shared_ptr<SplitSystem> lorenz(double sigma = 10.0, double r = 28.0, double b = 8.0 / 3.0);

// ABC flow split into f_A = A(0, sin x, cos x), f_B = B(cos y, 0, sin y),
// f_C = C(sin z, cos z, 0).
std::shared_ptr<SplitSystem> abc_flow(double A = 1.0, double B = 1.0, double C = 1.0);

}  // namespace splitting
