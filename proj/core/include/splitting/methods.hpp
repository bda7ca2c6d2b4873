#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "splitting/composition_spec.hpp"
#include "splitting/flows.hpp"

namespace splitting {

// ---- catalog: schemes with closed-form coefficients ----------------------

// Kick first, then drift: {a=(1), b=(1,0)}.
CompositionSpec symplectic_euler();
// Drift first, then kick: {a=(1), b=(0,1)}; adjoint of symplectic_euler().
CompositionSpec symplectic_euler_adjoint();
// Kick-drift-kick leapfrog {a=(1), b=(1/2,1/2)}.
CompositionSpec leapfrog();
// Recursive triple jump of a symmetric second-order method, order 2k, 3^{k-1} weights.
CompositionSpec triple_jump(int k);
// Five-stage symmetric composition (a, a, 1-4a, a, a), a = 1/(4 - 4^{1/3}).
CompositionSpec suzuki5();

// Names accepted by catalog_spec(); "triple_jump:<k>" is accepted as well.
std::vector<std::string> catalog_names();
CompositionSpec catalog_spec(const std::string& name);

// ---- modified-potential schemes ------------------------------------------

enum class FlowKind { A, B, ModifiedB };

struct ModifiedPotentialStage {
    FlowKind kind = FlowKind::A;
    double coeff = 0.0;
    int h_power = 1;
};

struct ModifiedPotentialScheme {
    std::string label;
    std::vector<ModifiedPotentialStage> stages;
    int claimed_order = 0;

    std::vector<double> coefficients() const;
    double sum(FlowKind kind) const;
};

// Fourth-order scheme with one modified-potential kick:
//   b(h/6) a(h/2) b(h/3) abb(-h^3/72) b(h/3) a(h/2) b(h/6).
ModifiedPotentialScheme chin_abb();

// Builds the integrator on a system whose auxiliary flow `abb_flow` is the
// modified-potential flow (duration c h^3 per stage).
Integrator compose_modified_potential(const ModifiedPotentialScheme& scheme, std::shared_ptr<const SplitSystem> system,
                                      std::size_t a_part = 0, std::size_t b_part = 1,
                                      std::size_t abb_flow = static_cast<std::size_t>(-1));

// ---- coefficient-form conversions ------------------------------------------

// Splitting form -> ALPHA form; requires sum a = sum b.
CompositionSpec ab_to_alpha(const CompositionSpec& spec);
// ALPHA form -> canonical BAB splitting form.
CompositionSpec alpha_to_ab(const std::vector<double>& alphas);
CompositionSpec alpha_to_ab(const CompositionSpec& alpha_spec);
// BETA -> ALPHA with alpha_{2j-1} = alpha_{2j} = beta_j / 2.
CompositionSpec beta_to_alpha(const std::vector<double>& betas);
CompositionSpec beta_to_alpha(const CompositionSpec& beta_spec);
// Coefficients of any form expressed as an alpha vector.
std::vector<double> to_alpha(const CompositionSpec& spec);
// Canonical BAB form of any spec except GAMMA.
CompositionSpec to_ab(const CompositionSpec& spec);

// Integrator of a spec on a two-part system: splitting forms via compose_ab,
// ALPHA via the adjoint chain of lie_trotter, BETA via strang().
Integrator make_integrator(const CompositionSpec& spec, std::shared_ptr<const SplitSystem> system);

// ---- serialization -----------------------------------------------------------

std::string spec_to_json(const CompositionSpec& spec);
CompositionSpec spec_from_json(const std::string& text);
void save_spec(const CompositionSpec& spec, const std::filesystem::path& path);
CompositionSpec load_spec(const std::filesystem::path& path);

// Catalog name or path to a JSON spec file.
CompositionSpec resolve_spec(const std::string& name_or_path);

}  // namespace splitting
