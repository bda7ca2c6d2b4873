#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "splitting/flows.hpp"

namespace splitting {

// Kernel psi_h enhanced with a change of variables pi_h: the processed method
// is pi o psi o pi^{-1}. Over n steps pi^{-1} is applied once at the start and
// pi once at every output, so the processor cost does not grow with n.
struct ProcessedMethod {
    Integrator kernel;
    Integrator processor;
    Integrator processor_inverse;

    // pi o psi^n o pi^{-1} applied to x0.
    State propagate(const State& x0, double h, std::size_t n_steps) const;
    // Samples pi(y_k) where y_k = psi^k(pi^{-1}(x0)); same sampling rules as integrate().
    Trajectory integrate(const State& x0, double h, std::size_t n_steps,
                         const std::vector<std::string>& record = {}, std::size_t sample_every = 1) const;
    // One processed step pi o psi o pi^{-1} as an opaque integrator (for
    // single-step comparisons; repeated use re-applies the processor each step).
    Integrator single_step() const;
};

// The inverse of a composition: stages reversed with negated coefficients.
// ConfigurationError for opaque integrators.
Integrator inverse(const Integrator& method);

// The identity map on a system (a composition without stages).
Integrator identity_map(std::shared_ptr<const SplitSystem> system);

// ConfigurationError unless the processor is a composition of part flows.
ProcessedMethod processed(const Integrator& kernel, const Integrator& processor);

// pi = chain(gamma)^{-1}, where chain(gamma) is the adjoint chain of `basic`
// with the gamma coefficients (same layout as the kernel's alpha). This is the
// orientation in which processor_conditions() hold. Requires even length.
Integrator processor_from_gamma(const std::vector<double>& gammas, const Integrator& basic);

// Kernel conditions for effective order 4: u1 - 1, u2, u3, u4. Target 5 adds
// u5, u23 and 2 u122 + u14 - u12^2.
std::map<std::string, double> effective_order_conditions(const std::vector<double>& kernel_alphas, int target);

// Processor conditions (residual = lhs - rhs):
//   target 4: u1(g), u2(g) - u12(a), u3(g) - u13(a), u12(g) - (u112(a) - u12(a)/2)
//   target 5: additionally u4(g) - u14(a), u13(g) - (u113(a) - u13(a)/2),
//             u112(g) - (u1112(a) - u112(a)/2 + u12(a)/12 - u12(a)^2/2)
std::map<std::string, double> processor_conditions(const std::vector<double>& kernel_alphas,
                                                   const std::vector<double>& processor_gammas, int target);

}  // namespace splitting
