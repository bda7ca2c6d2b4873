#include "splitting/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "splitting/errors.hpp"
#include "splitting/methods.hpp"

namespace splitting {

namespace {

constexpr double kUnitTol = 1e-12;

AbCoefficients b_first(const CompositionSpec& spec) {
    if (spec.is_splitting_form()) return canonical_bab(spec);
    return canonical_bab(to_ab(spec));
}

// Unevaluated sum hi + lo with |lo| <= ulp(hi) / 2.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

DoubleDouble operator+(DoubleDouble x, DoubleDouble y) {
    DoubleDouble s = two_sum(x.hi, y.hi);
    s.lo += x.lo + y.lo;
    return quick_two_sum(s.hi, s.lo);
}

DoubleDouble operator*(DoubleDouble x, DoubleDouble y) {
    const double p = x.hi * y.hi;
    const double e = std::fma(x.hi, y.hi, -p) + (x.hi * y.lo + x.lo * y.hi);
    return quick_two_sum(p, e);
}

DoubleDouble negate(DoubleDouble x) { return {-x.hi, -x.lo}; }

StabilityMatrix product(const AbCoefficients& ab, double h) {
    // Rows of K applied to (q, p); start from the identity and left-multiply.
    // Each shear has determinant exactly 1 for its (rounded) entry c = coeff * h.
    DoubleDouble k1{1.0}, k2{0.0}, k3{0.0}, k4{1.0};
    auto kick = [&](double b) {
        // ( 1 0 ; -b h 1 ) * K
        const DoubleDouble c{-b * h};
        k3 = k3 + c * k1;
        k4 = k4 + c * k2;
    };
    auto drift = [&](double a) {
        // ( 1 a h ; 0 1 ) * K
        const DoubleDouble c{a * h};
        k1 = k1 + c * k3;
        k2 = k2 + c * k4;
    };
    for (std::size_t i = 0; i < ab.a.size(); ++i) {
        kick(ab.b[i]);
        drift(ab.a[i]);
    }
    kick(ab.b.back());
    StabilityMatrix K{k1.hi, k2.hi, k3.hi, k4.hi, h};
    K.k1_lo = k1.lo;
    K.k2_lo = k2.lo;
    K.k3_lo = k3.lo;
    K.k4_lo = k4.lo;
    return K;
}

bool stable_at(const AbCoefficients& ab, double h) { return stability_functions(product(ab, h)).stable; }

}  // namespace

double StabilityMatrix::det() const noexcept {
    const DoubleDouble d = DoubleDouble{k1, k1_lo} * DoubleDouble{k4, k4_lo} +
                           negate(DoubleDouble{k2, k2_lo} * DoubleDouble{k3, k3_lo});
    return d.hi + d.lo;
}

StabilityMatrix stability_matrix(const CompositionSpec& spec, double h) { return product(b_first(spec), h); }

StabilityFunctions stability_functions(const StabilityMatrix& K) {
    StabilityFunctions f;
    f.p = K.half_trace();
    const double scale = std::max({1.0, std::abs(K.k1), std::abs(K.k2), std::abs(K.k3), std::abs(K.k4)});
    const double gap = 1.0 - std::abs(f.p);
    if (gap > kUnitTol) {
        f.stable = true;
    } else if (gap >= -kUnitTol) {
        const bool scalar = std::abs(K.k2) <= kUnitTol * scale && std::abs(K.k3) <= kUnitTol * scale &&
                            std::abs(K.k1 - K.k4) <= kUnitTol * scale;
        f.stable = scalar;
    } else {
        f.stable = false;
    }

    if (f.stable) f.phi = std::acos(std::clamp(f.p, -1.0, 1.0));
    else f.phi = std::numeric_limits<double>::quiet_NaN();

    if (K.k2 == 0.0 && K.k3 == 0.0) {
        f.gamma = 1.0;
    } else if (K.k3 != 0.0 && -K.k2 / K.k3 > 0.0) {
        f.gamma = std::sqrt(-K.k2 / K.k3);
    } else {
        f.gamma = std::numeric_limits<double>::quiet_NaN();
        if (K.k3 == 0.0 && std::abs(f.p) < 1.0) f.degenerate = true;
    }
    return f;
}

double stability_threshold(const CompositionSpec& spec, double h_max, double scan_step) {
    if (!(scan_step > 0.0) || !(h_max > scan_step)) throw ConfigurationError("stability_threshold: need 0 < scan_step < h_max");
    const AbCoefficients ab = b_first(spec);
    const auto n = static_cast<std::size_t>(std::floor(h_max / scan_step));
    double lo = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double h = static_cast<double>(k) * scan_step;
        if (stable_at(ab, h)) {
            lo = h;
            continue;
        }
        if (k == 1) return 0.0;
        double hi = h;
        while (hi - lo > 1e-9) {
            const double mid = 0.5 * (lo + hi);
            (stable_at(ab, mid) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<StabilityScanRow> stability_scan(const CompositionSpec& spec, double h_max, double dh) {
    if (!(dh > 0.0) || !(h_max > 0.0)) throw ConfigurationError("stability_scan: need dh > 0 and h_max > 0");
    const AbCoefficients ab = b_first(spec);
    std::vector<StabilityScanRow> rows;
    const auto n = static_cast<std::size_t>(std::floor(h_max / dh + 1e-9));
    rows.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double h = static_cast<double>(k) * dh;
        const auto f = stability_functions(product(ab, h));
        rows.push_back({h, f.p, f.stable});
    }
    return rows;
}

ModifiedFrequency modified_frequency(const CompositionSpec& spec, double h) {
    if (h == 0.0) return {};
    const auto f = stability_functions(stability_matrix(spec, h));
    if (!f.stable) throw DomainError("modified_frequency: method is unstable at this step size");
    if (!std::isfinite(f.gamma)) throw DomainError("modified_frequency: gamma(h) is undefined at this step size");
    return {f.phi / h, f.phi * f.gamma / h};
}

double sympl_euler_modified_hamiltonian(double q, double p, double h) {
    if (std::abs(h) >= 2.0) throw DomainError("sympl_euler_modified_hamiltonian: requires |h| < 2");
    const double quad = p * p + h * p * q + q * q;
    if (h == 0.0) return 0.5 * quad;
    return 2.0 * std::asin(0.5 * h) / (h * std::sqrt(4.0 - h * h)) * quad;
}

double verlet_modified_h_correction(const HamiltonianProblem& problem, const State& x, double h) {
    if (!problem.derivatives) throw ConfigurationError("verlet_modified_h_correction: problem has no second derivatives");
    const auto& d = *problem.derivatives;
    const std::size_t n = problem.dof;
    const Vec q(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    const Vec p(x.begin() + static_cast<std::ptrdiff_t>(n), x.end());
    const Vec Tp = d.T_p(p), Vq = d.V_q(q);
    const Vec Tpp = d.T_pp(p), Vqq = d.V_qq(q);
    double vqq_tt = 0.0, tpp_vv = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            vqq_tt += Vqq[i * n + j] * Tp[i] * Tp[j];
            tpp_vv += Tpp[i * n + j] * Vq[i] * Vq[j];
        }
    return problem.hamiltonian(x) + h * h * (-vqq_tt / 24.0 + tpp_vv / 12.0);
}

std::pair<std::vector<double>, std::vector<double>> matrix_splitting_step(const std::vector<double>& H,
                                                                           std::size_t N,
                                                                           const CompositionSpec& spec, double h,
                                                                           std::vector<double> q,
                                                                           std::vector<double> p) {
    if (H.size() != N * N || q.size() != N || p.size() != N)
        throw ConfigurationError("matrix_splitting_step: dimension mismatch");
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            if (std::abs(H[i * N + j] - H[j * N + i]) > 1e-12 * (1.0 + std::abs(H[i * N + j])))
                throw ConfigurationError("matrix_splitting_step: H must be symmetric");
    const AbCoefficients ab = b_first(spec);
    std::vector<double> w(N);
    auto apply = [&](const std::vector<double>& v, double c, std::vector<double>& target) {
        for (std::size_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < N; ++j) s += H[i * N + j] * v[j];
            w[i] = s;
        }
        for (std::size_t i = 0; i < N; ++i) target[i] += c * w[i];
    };
    for (std::size_t i = 0; i < ab.a.size(); ++i) {
        if (ab.b[i] != 0.0) apply(q, -h * ab.b[i], p);
        if (ab.a[i] != 0.0) apply(p, h * ab.a[i], q);
    }
    if (ab.b.back() != 0.0) apply(q, -h * ab.b.back(), p);
    return {std::move(q), std::move(p)};
}

}  // namespace splitting
