#include "splitting/problems.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "splitting/errors.hpp"

namespace splitting {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Vec head(const State& x, std::size_t d) { return Vec(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(d)); }
Vec tail(const State& x, std::size_t d) { return Vec(x.begin() + static_cast<std::ptrdiff_t>(d), x.end()); }

State join(const Vec& a, const Vec& b) {
    Vec v(a);
    v.insert(v.end(), b.begin(), b.end());
    return State(std::move(v));
}

Vec identity(std::size_t d) {
    Vec m(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = 1.0;
    return m;
}

double radius(const Vec& q) {
    const double r = std::hypot(q[0], q[1]);
    if (r == 0.0) throw SingularityError("r = 0: Kepler potential is singular at the origin");
    return r;
}

void require_dim(const State& x, std::size_t D, const char* who) {
    if (x.size() != D)
        throw ConfigurationError(std::string(who) + ": expected a state of dimension " + std::to_string(D) +
                                 ", got " + std::to_string(x.size()));
}

// H = |p|^2/2 + V(q) on top of rkn_problem with g = -grad V.
HamiltonianProblem separable_problem(std::string name, std::size_t d, ScalarFunction V, PositionField grad_V,
                                     MatrixField hess_V) {
    PositionField g = [grad_V](const Vec& q) {
        Vec f = grad_V(q);
        for (double& x : f) x = -x;
        return f;
    };
    MatrixField g_jac = [hess_V](const Vec& q) {
        Vec m = hess_V(q);
        for (double& x : m) x = -x;
        return m;
    };
    RknProblem rkn = rkn_problem(d, g, g_jac);

    HamiltonianProblem p;
    p.name = std::move(name);
    p.dof = d;
    p.system = rkn.system;
    p.system->parts[0].label = "T";
    p.system->parts[1].label = "V";
    p.hamiltonian = [V, d](const State& x) {
        const Vec pp = tail(x, d);
        double t = 0.0;
        for (double v : pp) t += 0.5 * v * v;
        return t + V(State(head(x, d)));
    };
    p.system->invariants.push_back({"H", p.hamiltonian});
    p.derivatives = SeparableDerivatives{[](const Vec& pp) { return pp; }, [d](const Vec&) { return identity(d); },
                                         grad_V, hess_V};
    return p;
}

}  // namespace

// ---- RKN --------------------------------------------------------------------------

std::size_t RknProblem::modified_flow_index() const {
    if (!g_jacobian) throw ConfigurationError("modified-potential flow needs the Jacobian of g");
    return system->parts.size();
}

Vec modified_force(const RknProblem& problem, const Vec& y) {
    if (!problem.g_jacobian) throw ConfigurationError("modified-potential flow needs the Jacobian of g");
    const std::size_t d = problem.d;
    const Vec g = problem.g(y);
    const Vec J = (*problem.g_jacobian)(y);
    Vec out(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += J[i * d + j] * g[j];
        out[i] = 2.0 * s;
    }
    return out;
}

RknProblem rkn_problem(std::size_t d, PositionField g, std::optional<MatrixField> g_jacobian) {
    if (d == 0) throw ConfigurationError("rkn_problem: dimension must be positive");
    if (!g) throw ConfigurationError("rkn_problem: missing force g");
    RknProblem prob;
    prob.d = d;
    prob.g = g;
    prob.g_jacobian = std::move(g_jacobian);
    auto sys = std::make_shared<SplitSystem>();
    sys->dimension = 2 * d;

    Part drift;
    drift.label = "drift";
    drift.cost = 0.0;
    drift.field = [d](const State& x) { return join(tail(x, d), Vec(d, 0.0)); };
    drift.flow = {"drift", [d](double t, const State& x) {
                      State y = x;
                      for (std::size_t i = 0; i < d; ++i) y[i] += t * x[d + i];
                      return y;
                  }};

    Part kick;
    kick.label = "kick";
    kick.cost = 1.0;
    kick.field = [d, g](const State& x) { return join(Vec(d, 0.0), g(head(x, d))); };
    kick.flow = {"kick", [d, g](double t, const State& x) {
                     if (t == 0.0) return x;
                     const Vec f = g(head(x, d));
                     State y = x;
                     for (std::size_t i = 0; i < d; ++i) y[d + i] += t * f[i];
                     return y;
                 }};

    sys->parts = {drift, kick};
    sys->full_field = [d, g](const State& x) { return join(tail(x, d), g(head(x, d))); };

    if (prob.g_jacobian) {
        const RknProblem copy = prob;
        Part abb;
        abb.label = "modified_kick";
        abb.cost = 1.0;
        abb.field = [d, copy](const State& x) {
            Vec f = modified_force(copy, head(x, d));
            for (double& v : f) v = -v;
            return join(Vec(d, 0.0), f);
        };
        abb.flow = {"modified_kick", [d, copy](double t, const State& x) {
                        if (t == 0.0) return x;
                        const Vec f = modified_force(copy, head(x, d));
                        State y = x;
                        for (std::size_t i = 0; i < d; ++i) y[d + i] -= t * f[i];
                        return y;
                    }};
        sys->auxiliary.push_back(abb);
    }
    prob.system = sys;
    return prob;
}

State hamiltonian_field_fd(const HamiltonianProblem& problem, const State& x, double fd) {
    const std::size_t d = problem.dof;
    State grad(2 * d, 0.0);
    for (std::size_t i = 0; i < 2 * d; ++i) {
        State xp = x, xm = x;
        xp[i] += fd;
        xm[i] -= fd;
        grad[i] = (problem.hamiltonian(xp) - problem.hamiltonian(xm)) / (2.0 * fd);
    }
    State f(2 * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        f[i] = grad[d + i];
        f[d + i] = -grad[i];
    }
    return f;
}

// ---- harmonic oscillator -------------------------------------------------------------

HamiltonianProblem harmonic_oscillator() {
    auto p = separable_problem(
        "harmonic_oscillator", 1, [](const State& q) { return 0.5 * q[0] * q[0]; },
        [](const Vec& q) { return Vec{q[0]}; }, [](const Vec&) { return Vec{1.0}; });
    p.system->parts[0].label = "A";
    p.system->parts[1].label = "B";
    p.exact_flow = FlowMap{"rotation", [](double t, const State& x) {
                               require_dim(x, 2, "harmonic oscillator");
                               const double c = std::cos(t), s = std::sin(t);
                               return State{c * x[0] + s * x[1], -s * x[0] + c * x[1]};
                           }};
    p.initial_state = State{4.0, 0.0};
    return p;
}

// ---- Kepler --------------------------------------------------------------------------

namespace {

double kepler_potential(const Vec& q) { return -1.0 / radius(q); }

Vec kepler_gradient(const Vec& q) {
    const double r = radius(q);
    const double r3 = r * r * r;
    return {q[0] / r3, q[1] / r3};
}

Vec kepler_hessian(const Vec& q) {
    const double r = radius(q);
    const double r3 = r * r * r, r5 = r3 * r * r;
    return {1.0 / r3 - 3.0 * q[0] * q[0] / r5, -3.0 * q[0] * q[1] / r5, -3.0 * q[0] * q[1] / r5,
            1.0 / r3 - 3.0 * q[1] * q[1] / r5};
}

void add_kepler_invariants(HamiltonianProblem& p) {
    p.system->invariants.push_back({"L", kepler_angular_momentum});
}

}  // namespace

State kepler_initial_state(double e) {
    if (!(e >= 0.0 && e < 1.0)) throw DomainError("eccentricity must lie in [0, 1)");
    return State{1.0 - e, 0.0, 0.0, std::sqrt((1.0 + e) / (1.0 - e))};
}

double kepler_energy(const State& x) {
    return 0.5 * (x[2] * x[2] + x[3] * x[3]) + kepler_potential({x[0], x[1]});
}

double kepler_angular_momentum(const State& x) { return x[0] * x[3] - x[1] * x[2]; }

State kepler_exact_flow(const State& x, double t) {
    require_dim(x, 4, "kepler_exact_flow");
    if (t == 0.0) return x;
    const double q1 = x[0], q2 = x[1], p1 = x[2], p2 = x[3];
    const double r0 = radius({q1, q2});
    const double energy = 0.5 * (p1 * p1 + p2 * p2) - 1.0 / r0;
    if (!(energy < 0.0)) throw UnsupportedOrbitError("Kepler propagation supports elliptic orbits only (H >= 0)");
    const double a = -0.5 / energy;
    const double sqrt_a = std::sqrt(a);
    const double n = 1.0 / (a * sqrt_a);
    const double sigma0 = q1 * p1 + q2 * p2;
    const double ec = 1.0 - r0 / a;  // e cos E_0
    const double es = sigma0 / sqrt_a;  // e sin E_0
    const double e = std::hypot(ec, es);

    // Kepler's equation for the increment x = E - E_0 of the eccentric
    // anomaly: x - ec sin x + es (1 - cos x) = n t, reduced modulo 2 pi.
    const double dM = n * t;
    const double k = std::round(dM / two_pi);
    const double rem = dM - k * two_pi;
    auto F = [&](double v) { return v - ec * std::sin(v) + es * (1.0 - std::cos(v)) - rem; };
    auto dF = [&](double v) { return 1.0 - ec * std::cos(v) + es * std::sin(v); };
    double lo = rem - 2.0 * e - 1e-15, hi = rem + 2.0 * e + 1e-15;
    double v = rem;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        const double fv = F(v);
        // Residual at the round-off level of the summed terms: v is the root.
        if (std::fabs(fv) <= 4.0 * std::numeric_limits<double>::epsilon() * (std::fabs(v) + e + std::fabs(rem))) {
            converged = true;
            break;
        }
        if (fv < 0.0)
            lo = std::max(lo, v);
        else
            hi = std::min(hi, v);
        double next = v - fv / dF(v);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const bool small = std::fabs(next - v) <= 1e-14 * std::max(1.0, std::fabs(v));
        v = next;
        if (small) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericError("Kepler's equation: Newton iteration did not converge in 50 iterations");

    const double c = std::cos(v), s = std::sin(v);
    const double r = a + (r0 - a) * c + sigma0 * sqrt_a * s;
    const double f = 1.0 - (a / r0) * (1.0 - c);
    const double g = (rem - (v - s)) / n;
    const double fdot = -sqrt_a * s / (r * r0);
    const double gdot = 1.0 - (a / r) * (1.0 - c);
    return State{f * q1 + g * p1, f * q2 + g * p2, fdot * q1 + gdot * p1, fdot * q2 + gdot * p2};
}

FlowMap kepler_flow() {
    return {"kepler", [](double t, const State& x) { return kepler_exact_flow(x, t); }};
}

HamiltonianProblem kepler(double e) {
    auto p = separable_problem(
        "kepler", 2, [](const State& q) { return kepler_potential(q.coords()); }, kepler_gradient, kepler_hessian);
    add_kepler_invariants(p);
    p.exact_flow = kepler_flow();
    p.initial_state = kepler_initial_state(e);
    return p;
}

// ---- perturbed Kepler ----------------------------------------------------------------

namespace {

double perturbation_potential(const Vec& q, double alpha) {
    const double r = radius(q);
    const double r2 = r * r;
    return -(1.0 - 3.0 * alpha * q[0] * q[0] / r2) / (2.0 * r2 * r);
}

// Hessian of H_1 by differentiating the analytic gradient.
Vec perturbation_hessian(const Vec& q, double alpha) {
    const double r = radius(q);
    const double q1 = q[0], q2 = q[1];
    const double r2 = r * r, r5 = r2 * r2 * r, r7 = r5 * r2, r9 = r7 * r2;
    // grad_i = 1.5 q_i / r^5 + 3 alpha q1 delta_{i1} / r^5 - 7.5 alpha q1^2 q_i / r^7
    Vec H(4, 0.0);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double qi = q[i], qj = q[j];
            const double dij = i == j ? 1.0 : 0.0;
            double v = 1.5 * (dij / r5 - 5.0 * qi * qj / r7);
            if (i == 0) v += 3.0 * alpha * ((j == 0 ? 1.0 : 0.0) / r5 - 5.0 * q1 * qj / r7);
            const double dq1sq = j == 0 ? 2.0 * q1 : 0.0;
            v -= 7.5 * alpha * (dq1sq * qi / r7 + q1 * q1 * dij / r7 - 7.0 * q1 * q1 * qi * qj / r9);
            H[static_cast<std::size_t>(i * 2 + j)] = v;
        }
    }
    (void)q2;
    return H;
}

// A, B, C, D polynomials of the modified perturbation kick.
struct KickPolynomials {
    double A, B, C, D;
};

KickPolynomials kick_polynomials(const Vec& q, double alpha) {
    const double q1 = q[0], q2 = q[1];
    const double x = q1 * q1, y = q2 * q2, r2 = x + y, r4 = r2 * r2;
    KickPolynomials k;
    k.A = 1.5 * (alpha * (3.0 * x - 2.0 * y) - r2);
    k.B = 1.5 * (5.0 * alpha * x - r2);
    k.C = 9.0 * (2.0 * r4 + 3.0 * alpha * r2 * (y - 4.0 * x) + alpha * alpha * (18.0 * x * x + x * y - 2.0 * y * y));
    k.D = 9.0 * (2.0 * r4 - 15.0 * alpha * r2 * x + 5.0 * alpha * alpha * x * (5.0 * x + 2.0 * y));
    return k;
}

}  // namespace

Vec perturbation_gradient(const Vec& q, double alpha) {
    const double r = radius(q);
    const double r2 = r * r, r5 = r2 * r2 * r, r7 = r5 * r2;
    const double q1 = q[0];
    Vec g{1.5 * q[0] / r5, 1.5 * q[1] / r5};
    g[0] += 3.0 * alpha * q1 / r5;
    g[0] -= 7.5 * alpha * q1 * q1 * q[0] / r7;
    g[1] -= 7.5 * alpha * q1 * q1 * q[1] / r7;
    return g;
}

FlowMap perturbed_kepler_modified_kick(double eps, double alpha, double b, double c) {
    return {"perturbation_modified_kick", [eps, alpha, b, c](double h, const State& x) {
                require_dim(x, 4, "perturbed_kepler_modified_kick");
                const Vec q{x[0], x[1]};
                const double r = radius(q);
                const double r2 = r * r, r7 = r2 * r2 * r2 * r, r14 = r7 * r7;
                const auto k = kick_polynomials(q, alpha);
                State y = x;
                y[2] += h * eps * (b * k.A / r7 - h * h * eps * c * k.C / r14) * q[0];
                y[3] += h * eps * (b * k.B / r7 - h * h * eps * c * k.D / r14) * q[1];
                return y;
            }};
}

HamiltonianProblem perturbed_kepler(double eps, double alpha, double e) {
    if (!(eps >= 0.0)) throw DomainError("perturbation parameter must be non-negative");
    auto p = separable_problem(
        "perturbed_kepler", 2,
        [eps, alpha](const State& q) {
            return kepler_potential(q.coords()) + eps * perturbation_potential(q.coords(), alpha);
        },
        [eps, alpha](const Vec& q) {
            Vec g = kepler_gradient(q);
            const Vec g1 = perturbation_gradient(q, alpha);
            for (int i = 0; i < 2; ++i) g[i] += eps * g1[i];
            return g;
        },
        [eps, alpha](const Vec& q) {
            Vec H = kepler_hessian(q);
            const Vec H1 = perturbation_hessian(q, alpha);
            for (int i = 0; i < 4; ++i) H[i] += eps * H1[i];
            return H;
        });
    add_kepler_invariants(p);
    p.system->perturbation_parameter = eps;
    p.initial_state = kepler_initial_state(e);

    // H_0 + eps H_1 split.
    auto ni = std::make_shared<SplitSystem>();
    ni->dimension = 4;
    ni->perturbation_parameter = eps;
    const HamiltonianProblem k0 = kepler(e);
    Part h0;
    h0.label = "H0";
    h0.cost = 0.0;
    h0.field = k0.system->full_field;
    h0.flow = kepler_flow();
    Part h1;
    h1.label = "eps_H1";
    h1.cost = 1.0;
    h1.field = [eps, alpha](const State& x) {
        const Vec g = perturbation_gradient({x[0], x[1]}, alpha);
        return State{0.0, 0.0, -eps * g[0], -eps * g[1]};
    };
    h1.flow = {"eps_H1_kick", [eps, alpha](double t, const State& x) {
                   if (t == 0.0) return x;
                   const Vec g = perturbation_gradient({x[0], x[1]}, alpha);
                   return State{x[0], x[1], x[2] - t * eps * g[0], x[3] - t * eps * g[1]};
               }};
    Part mod;
    mod.label = "eps_H1_modified_kick";
    mod.cost = 1.0;
    mod.field = [eps, alpha](const State& x) {
        const Vec q{x[0], x[1]};
        const double r = radius(q), r14 = std::pow(r, 14);
        const auto k = kick_polynomials(q, alpha);
        return State{0.0, 0.0, eps * eps * k.C * q[0] / r14, eps * eps * k.D * q[1] / r14};
    };
    mod.flow = {"eps_H1_modified_kick", [f = mod.field](double t, const State& x) {
                    if (t == 0.0) return x;
                    return x + t * f(x);
                }};
    ni->parts = {h0, h1};
    ni->auxiliary = {mod};
    ni->full_field = p.system->full_field;
    ni->invariants = p.system->invariants;
    p.near_integrable = ni;
    return p;
}

// ---- Henon-Heiles ----------------------------------------------------------------------

HamiltonianProblem henon_heiles() {
    auto p = separable_problem(
        "henon_heiles", 2,
        [](const State& q) {
            return 0.5 * (q[0] * q[0] + q[1] * q[1]) + q[0] * q[0] * q[1] - q[1] * q[1] * q[1] / 3.0;
        },
        [](const Vec& q) { return Vec{q[0] + 2.0 * q[0] * q[1], q[1] + q[0] * q[0] - q[1] * q[1]}; },
        [](const Vec& q) { return Vec{1.0 + 2.0 * q[1], 2.0 * q[0], 2.0 * q[0], 1.0 - 2.0 * q[1]}; });
    p.initial_state = State{0.0, 0.1, 0.49, 0.0};
    return p;
}

// ---- Volterra-Lotka ----------------------------------------------------------------------

namespace {

void require_positive(const State& x) {
    if (!(x[0] > 0.0 && x[1] > 0.0)) throw DomainError("Volterra-Lotka needs u > 0 and v > 0");
}

}  // namespace

double volterra_lotka_invariant(const State& x) {
    require_positive(x);
    return std::log(x[0]) - x[0] + 2.0 * std::log(x[1]) - x[1];
}

std::shared_ptr<SplitSystem> volterra_lotka() {
    auto sys = std::make_shared<SplitSystem>();
    sys->dimension = 2;
    Part a;
    a.label = "u";
    a.field = [](const State& x) {
        require_positive(x);
        return State{x[0] * (x[1] - 2.0), 0.0};
    };
    a.flow = {"u", [](double t, const State& x) {
                  require_positive(x);
                  return State{x[0] * std::exp(t * (x[1] - 2.0)), x[1]};
              }};
    Part b;
    b.label = "v";
    b.field = [](const State& x) {
        require_positive(x);
        return State{0.0, x[1] * (1.0 - x[0])};
    };
    b.flow = {"v", [](double t, const State& x) {
                  require_positive(x);
                  return State{x[0], x[1] * std::exp(t * (1.0 - x[0]))};
              }};
    sys->parts = {a, b};
    sys->full_field = [](const State& x) {
        require_positive(x);
        return State{x[0] * (x[1] - 2.0), x[1] * (1.0 - x[0])};
    };
    sys->invariants.push_back({"I", volterra_lotka_invariant});
    return sys;
}

// ---- Lorenz ---------------------------------------------------------------------------

std::shared_ptr<SplitSystem> lorenz(double sigma, double r, double b) {
    auto sys = std::make_shared<SplitSystem>();
    sys->dimension = 3;

    // 2 x 2 block M = [[-sigma, sigma], [r, -1]]:
    // exp(tM) = e^{tau t} (c(t) I + s(t) (M - tau I)), tau = tr M / 2, disc = tau^2 - det M.
    const double m11 = -sigma, m12 = sigma, m21 = r, m22 = -1.0;
    const double tau = 0.5 * (m11 + m22);
    const double disc = tau * tau - (m11 * m22 - m12 * m21);
    Part lin;
    lin.label = "linear";
    lin.field = [=](const State& x) { return State{m11 * x[0] + m12 * x[1], m21 * x[0] + m22 * x[1], -b * x[2]}; };
    lin.flow = {"linear", [=](double t, const State& x) {
                    double c, s;
                    if (disc > 0.0) {
                        const double d = std::sqrt(disc);
                        c = std::cosh(d * t);
                        s = std::sinh(d * t) / d;
                    } else if (disc < 0.0) {
                        const double w = std::sqrt(-disc);
                        c = std::cos(w * t);
                        s = std::sin(w * t) / w;
                    } else {
                        c = 1.0;
                        s = t;
                    }
                    const double g = std::exp(tau * t);
                    const double e11 = g * (c + s * (m11 - tau)), e12 = g * s * m12;
                    const double e21 = g * s * m21, e22 = g * (c + s * (m22 - tau));
                    return State{e11 * x[0] + e12 * x[1], e21 * x[0] + e22 * x[1], std::exp(-b * t) * x[2]};
                }};
    Part rot;
    rot.label = "bilinear";
    rot.field = [](const State& x) { return State{0.0, -x[0] * x[2], x[0] * x[1]}; };
    rot.flow = {"bilinear", [](double t, const State& x) {
                    const double c = std::cos(x[0] * t), s = std::sin(x[0] * t);
                    return State{x[0], c * x[1] - s * x[2], s * x[1] + c * x[2]};
                }};
    sys->parts = {lin, rot};
    sys->full_field = [=](const State& x) {
        return State{sigma * (x[1] - x[0]), r * x[0] - x[1] - x[0] * x[2], x[0] * x[1] - b * x[2]};
    };
    return sys;
}

// ---- ABC flow ---------------------------------------------------------------------------

std::shared_ptr<SplitSystem> abc_flow(double A, double B, double C) {
    auto sys = std::make_shared<SplitSystem>();
    sys->dimension = 3;
    Part pa;
    pa.label = "A";
    pa.field = [A](const State& x) { return State{0.0, A * std::sin(x[0]), A * std::cos(x[0])}; };
    pa.flow = {"A", [A](double t, const State& x) {
                   return State{x[0], x[1] + t * A * std::sin(x[0]), x[2] + t * A * std::cos(x[0])};
               }};
    Part pb;
    pb.label = "B";
    pb.field = [B](const State& x) { return State{B * std::cos(x[1]), 0.0, B * std::sin(x[1])}; };
    pb.flow = {"B", [B](double t, const State& x) {
                   return State{x[0] + t * B * std::cos(x[1]), x[1], x[2] + t * B * std::sin(x[1])};
               }};
    Part pc;
    pc.label = "C";
    pc.field = [C](const State& x) { return State{C * std::sin(x[2]), C * std::cos(x[2]), 0.0}; };
    pc.flow = {"C", [C](double t, const State& x) {
                   return State{x[0] + t * C * std::sin(x[2]), x[1] + t * C * std::cos(x[2]), x[2]};
               }};
    sys->parts = {pa, pb, pc};
    sys->full_field = [A, B, C](const State& x) {
        return State{B * std::cos(x[1]) + C * std::sin(x[2]), A * std::sin(x[0]) + C * std::cos(x[2]),
                     A * std::cos(x[0]) + B * std::sin(x[1])};
    };
    return sys;
}

}  // namespace splitting
