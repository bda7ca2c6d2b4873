#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "splitting/composition_spec.hpp"
#include "splitting/problems.hpp"

namespace splitting {

// One-step matrix of a splitting method on the unit harmonic oscillator,
// acting on (q, p): ( K1 K2 ; K3 K4 ). The product of shears is accumulated
// in double-double arithmetic; k*_lo hold the low-order parts so that det()
// stays accurate when the entries are large (high-order compositions at
// large h reach |K_ij| ~ 1e7).
struct StabilityMatrix {
    double k1 = 1.0, k2 = 0.0, k3 = 0.0, k4 = 1.0;
    double h = 0.0;
    double k1_lo = 0.0, k2_lo = 0.0, k3_lo = 0.0, k4_lo = 0.0;

    double det() const noexcept;
    double half_trace() const noexcept { return 0.5 * ((k1 + k4) + (k1_lo + k4_lo)); }
};

// Product of the shear factors ( 1 0 ; -b h 1 ) and ( 1 a h ; 0 1 ) in the
// canonical b-first order: K = B(b_{s+1}) A(a_s) ... A(a_1) B(b_1).
// ALPHA and BETA specs are converted to splitting form first.
StabilityMatrix stability_matrix(const CompositionSpec& spec, double h);

struct StabilityFunctions {
    double p = 1.0;  // half trace
    bool stable = true;
    double phi = 0.0;    // arccos(p) in [0, pi] when stable
    double gamma = 1.0;  // sqrt(-K2 / K3); NaN when undefined
    bool degenerate = false;  // K3 = 0 with K2 != 0 at |p| < 1
};

// |p| < 1: stable (distinct unit-modulus eigenvalues). |p| = 1 (to 1e-12):
// stable only when K = +-I, otherwise powers grow linearly. |p| > 1: unstable.
StabilityFunctions stability_functions(const StabilityMatrix& K);

// Largest x such that the method is stable for every h in (0, x): scan at
// `scan_step`, then bisection to 1e-9. Returns +infinity when no instability
// is found up to h_max and 0 when the first scanned point is unstable.
double stability_threshold(const CompositionSpec& spec, double h_max = 50.0, double scan_step = 1e-3);

struct StabilityScanRow {
    double h = 0.0;
    double p = 1.0;
    bool stable = true;
};
std::vector<StabilityScanRow> stability_scan(const CompositionSpec& spec, double h_max, double dh);

struct ModifiedFrequency {
    double omega_tilde = 1.0;     // phi(h) / h
    double rescale_factor = 1.0;  // phi(h) gamma(h) / h
};
// DomainError when the method is unstable at h.
ModifiedFrequency modified_frequency(const CompositionSpec& spec, double h);

// 2 arcsin(h/2) / (h sqrt(4 - h^2)) (p^2 + h p q + q^2), conserved exactly by
// the drift-first symplectic Euler map ( 1 h ; -h 1-h^2 ) on the harmonic
// oscillator. DomainError for |h| >= 2.
double sympl_euler_modified_hamiltonian(double q, double p, double h);

// H(x) + h^2 (-V_qq(T_p, T_p) / 24 + T_pp(V_q, V_q) / 12): the truncated
// modified Hamiltonian of the drift-outer leapfrog. ConfigurationError when
// the problem has no second derivatives.
double verlet_modified_h_correction(const HamiltonianProblem& problem, const State& x, double h);

// One step of the splitting method on q' = H p, p' = -H q with a symmetric
// N x N matrix H (row-major): p -= h b_i H q and q += h a_i H p in b-first
// order. One matrix-vector product per nonzero coefficient.
std::pair<std::vector<double>, std::vector<double>> matrix_splitting_step(const std::vector<double>& H,
                                                                           std::size_t N,
                                                                           const CompositionSpec& spec, double h,
                                                                           std::vector<double> q,
                                                                           std::vector<double> p);

}  // namespace splitting
