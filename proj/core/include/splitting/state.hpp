#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace splitting {

// A point of phase space. Canonical layout for mechanical problems is
// (q_1..q_d, p_1..p_d).
class State {
public:
    State() = default;
    explicit State(std::size_t dim, double fill = 0.0) : x_(dim, fill) {}
    State(std::initializer_list<double> init) : x_(init) {}
    explicit State(std::vector<double> coords) : x_(std::move(coords)) {}

    std::size_t size() const noexcept { return x_.size(); }
    double& operator[](std::size_t i) { return x_[i]; }
    double operator[](std::size_t i) const { return x_[i]; }

    auto begin() noexcept { return x_.begin(); }
    auto end() noexcept { return x_.end(); }
    auto begin() const noexcept { return x_.begin(); }
    auto end() const noexcept { return x_.end(); }

    const std::vector<double>& coords() const noexcept { return x_; }
    std::vector<double>& coords() noexcept { return x_; }

    bool all_finite() const noexcept {
        for (double v : x_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    friend bool operator==(const State&, const State&) = default;

private:
    std::vector<double> x_;
};

inline State operator+(State a, const State& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline State operator-(State a, const State& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline State operator*(double s, State a) {
    for (double& v : a) v *= s;
    return a;
}

// a + s*b
inline State axpy(const State& a, double s, const State& b) {
    State r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * b[i];
    return r;
}

inline double norm2(const State& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

inline double distance(const State& a, const State& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double max_abs_diff(const State& a, const State& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace splitting
