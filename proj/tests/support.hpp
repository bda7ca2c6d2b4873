#pragma once

// Shared helpers for the unit and acceptance suites: seeded random inputs and
// oracles that do not go through the library's own evaluation paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "splitting/flows.hpp"

namespace testing_support {

using splitting::State;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611ULL);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline std::vector<double> random_vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
}

inline State random_state(std::size_t n, double lo = -1.0, double hi = 1.0) { return State(random_vector(n, lo, hi)); }

// Explicit enumeration of every index chain 1 <= j_1 <= j_2*, ..., j_{m-1} <= j_m*
// (j* = j - 1 for even j), signs (-1)^{j (i - 1)} on alpha_j^i.
inline double brute_force_u(const std::vector<int>& index, const std::vector<double>& alpha) {
    const int n = static_cast<int>(alpha.size());
    const int m = static_cast<int>(index.size());
    auto term = [&](int j, int i) {
        const double p = std::pow(alpha[j - 1], i);
        return ((j * (i - 1)) % 2 == 0) ? p : -p;
    };
    std::vector<int> js(m, 1);
    double total = 0.0;
    while (true) {
        bool ok = true;
        for (int k = 0; k + 1 < m && ok; ++k) {
            const int star = js[k + 1] % 2 == 0 ? js[k + 1] - 1 : js[k + 1];
            ok = js[k] <= star;
        }
        if (ok) {
            double prod = 1.0;
            for (int k = 0; k < m; ++k) prod *= term(js[k], index[k]);
            total += prod;
        }
        int pos = m - 1;
        while (pos >= 0 && js[pos] == n) js[pos--] = 1;
        if (pos < 0) break;
        ++js[pos];
    }
    return total;
}

// Central-difference Jacobian (row-major) of a map R^n -> R^n.
inline std::vector<double> fd_jacobian(const std::function<State(const State&)>& f, const State& x, double eps = 1e-6) {
    const std::size_t n = x.size();
    std::vector<double> J(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        State xp = x, xm = x;
        xp[j] += eps;
        xm[j] -= eps;
        const State fp = f(xp), fm = f(xm);
        for (std::size_t i = 0; i < n; ++i) J[i * n + j] = (fp[i] - fm[i]) / (2.0 * eps);
    }
    return J;
}

// max |M^T J M - J| for the canonical J of a (q, p) layout.
inline double symplecticity_defect(const std::vector<double>& M, std::size_t n) {
    const std::size_t d = n / 2;
    auto Jc = [d](std::size_t i, std::size_t j) {
        if (i < d && j == i + d) return 1.0;
        if (i >= d && j + d == i) return -1.0;
        return 0.0;
    };
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) s += M[i * n + a] * Jc(i, j) * M[j * n + b];
            worst = std::max(worst, std::abs(s - Jc(a, b)));
        }
    return worst;
}

// Fourth-order central-difference gradient of a scalar function.
inline std::vector<double> fd_gradient(const std::function<double(const State&)>& f, const State& x, double eps = 1e-3) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto at = [&](double d) {
            State y = x;
            y[i] += d;
            return f(y);
        };
        g[i] = (-at(2 * eps) + 8 * at(eps) - 8 * at(-eps) + at(-2 * eps)) / (12 * eps);
    }
    return g;
}

// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

}  // namespace testing_support
