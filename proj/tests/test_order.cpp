#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "splitting/errors.hpp"
#include "splitting/methods.hpp"
#include "splitting/order.hpp"
#include "splitting/problems.hpp"
#include "support.hpp"

using namespace splitting;
using testing_support::brute_force_u;
using testing_support::random_vector;

namespace {

// Lyndon words counted through the rotation characterisation: a word is
// Lyndon iff it is strictly smaller than each of its non-trivial rotations.
bool lyndon_by_rotation(const std::vector<int>& w) {
    for (std::size_t r = 1; r < w.size(); ++r) {
        std::vector<int> rot(w.begin() + static_cast<long>(r), w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
        if (!(w < rot)) return false;
    }
    return true;
}

void compositions(int n, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(prefix);
        return;
    }
    for (int k = 1; k <= n; ++k) {
        prefix.push_back(k);
        compositions(n - k, prefix, out);
        prefix.pop_back();
    }
}

std::vector<std::vector<int>> lyndon_oracle(int n) {
    std::vector<int> prefix;
    std::vector<std::vector<int>> all, out;
    compositions(n, prefix, all);
    for (auto& w : all)
        if (lyndon_by_rotation(w)) out.push_back(w);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> palindrome(std::size_t half) {
    auto v = random_vector(half, -1.0, 1.0);
    std::vector<double> p = v;
    p.insert(p.end(), v.rbegin(), v.rend());
    return p;
}

}  // namespace

TEST_CASE("lyndon multi-indices of small weight") {
    const auto l3 = lyndon_multiindices(3);
    REQUIRE(l3.size() == 2);
    CHECK(l3[0].entries == std::vector<int>{1, 2});
    CHECK(l3[1].entries == std::vector<int>{3});
    const auto l4 = lyndon_multiindices(4);
    REQUIRE(l4.size() == 3);
    CHECK(l4[0].entries == std::vector<int>{1, 1, 2});
    CHECK(l4[1].entries == std::vector<int>{1, 3});
    CHECK(l4[2].entries == std::vector<int>{4});
    CHECK(l4[0].name() == "u112");
    CHECK(LyndonMultiIndex{{1, 10}}.name() == "u(1,10)");
}

TEST_CASE("lyndon enumeration agrees with the rotation oracle") {
    for (int n = 1; n <= 12; ++n) {
        CAPTURE(n);
        const auto lib = lyndon_multiindices(n);
        const auto oracle = lyndon_oracle(n);
        REQUIRE(lib.size() == oracle.size());
        for (std::size_t i = 0; i < lib.size(); ++i) CHECK(lib[i].entries == oracle[i]);
        const auto counts = count_conditions(n);
        CHECK(counts.general == static_cast<long long>(oracle.size()));
        const auto odd = std::count_if(oracle.begin(), oracle.end(), [](const std::vector<int>& w) {
            return std::all_of(w.begin(), w.end(), [](int x) { return x % 2 == 1; });
        });
        CHECK(counts.odd_only == odd);
    }
}

TEST_CASE("is_lyndon on hand-picked words") {
    CHECK(is_lyndon({1, 2}));
    CHECK(is_lyndon({1, 1, 3}));
    CHECK_FALSE(is_lyndon({1, 3, 1}));
    CHECK_FALSE(is_lyndon({2, 2}));
    CHECK_FALSE(is_lyndon({2, 1}));
    CHECK(is_lyndon({4}));
}

TEST_CASE("cumulative symmetric totals sum the odd-weight counts") {
    const auto totals = symmetric_condition_totals(12);
    REQUIRE(totals.size() == 6);
    long long n = 0, m = 0;
    for (int q = 1; q <= 6; ++q) {
        n += static_cast<long long>(lyndon_oracle(2 * q - 1).size());
        const auto odd = lyndon_oracle(2 * q - 1);
        m += std::count_if(odd.begin(), odd.end(), [](const std::vector<int>& w) {
            return std::all_of(w.begin(), w.end(), [](int x) { return x % 2 == 1; });
        });
        CHECK(totals[q - 1].order == 2 * q);
        CHECK(totals[q - 1].general == n);
        CHECK(totals[q - 1].odd_only == m);
    }
}

TEST_CASE("stored RKN condition counts") {
    const auto& l = rkn_condition_counts();
    CHECK(l == std::vector<int>{1, 2, 2, 4, 5, 10, 14, 25, 39, 69});
}

TEST_CASE("eval_u matches explicit chain enumeration") {
    for (int trial = 0; trial < 30; ++trial) {
        const auto alpha = random_vector(2 * (1 + trial % 4), -1.0, 1.0);
        for (int w = 1; w <= 5; ++w)
            for (const auto& idx : lyndon_multiindices(w))
                CHECK(std::abs(eval_u(idx, alpha) - brute_force_u(idx.entries, alpha)) < 1e-14);
        // Non-Lyndon indices are valid inputs too.
        CHECK(std::abs(eval_u(std::vector<int>{2, 1}, alpha) - brute_force_u({2, 1}, alpha)) < 1e-14);
    }
}

TEST_CASE("eval_u closed forms for one and two indices") {
    const std::vector<double> alpha{0.3, -0.1, 0.5, 0.3};
    CHECK(eval_u(std::vector<int>{1}, alpha) == doctest::Approx(1.0));
    // alpha_j^{(2)} = (-1)^j alpha_j^2
    CHECK(eval_u(std::vector<int>{2}, alpha) == doctest::Approx(-0.09 + 0.01 - 0.25 + 0.09));
    CHECK(eval_u(std::vector<int>{3}, alpha) == doctest::Approx(0.027 - 0.001 + 0.125 + 0.027));
    CHECK_THROWS_AS(eval_u(std::vector<int>{1}, std::vector<double>{0.5, 0.2, 0.3}), ConfigurationError);
    CHECK_THROWS_AS(eval_u(std::vector<int>{1}, std::vector<double>{}), ConfigurationError);
}

TEST_CASE("certify reproduces the known orders") {
    CHECK(certify(symplectic_euler(), 3).certified_order == 1);
    CHECK(certify(leapfrog(), 3).certified_order == 2);
    CHECK(certify(triple_jump(2), 5).certified_order == 4);
    CHECK(certify(suzuki5(), 5).certified_order == 4);
    CHECK(certify(triple_jump(3), 7).certified_order == 6);
    const auto r = certify(leapfrog(), 3);
    REQUIRE(r.first_failure.has_value());
    CHECK(r.first_failure->index.weight() == 3);
    CHECK(std::abs(r.first_failure->residual) > 1e-3);
}

TEST_CASE("reduced condition sets contain the expected indices") {
    const auto r = certify(triple_jump(3), 6, SymmetryAssumption::Both);
    std::set<std::string> names;
    for (const auto& c : r.conditions) names.insert(c.index.name());
    CHECK(names == std::set<std::string>{"u1", "u3", "u5", "u113"});
    CHECK(r.certified_order == 6);
    CHECK(std::abs(r.residuals.at("u113")) < 1e-12);

    const auto general = certify(triple_jump(3), 6, SymmetryAssumption::General);
    CHECK(general.certified_order == 6);
    CHECK(general.conditions.size() == static_cast<std::size_t>(1 + 1 + 2 + 3 + 6 + 9));
}

TEST_CASE("certify rejects inconsistent methods and unsupported assumptions") {
    CHECK_THROWS_AS(certify(std::vector<double>{0.5, 0.4}, 2), InconsistentMethodError);
    CHECK_THROWS_AS(certify(std::vector<double>{0.7, 0.3}, 2, SymmetryAssumption::TimeSymmetric), ContractViolation);
    CHECK_THROWS_AS(certify(std::vector<double>{0.3, 0.2, 0.3, 0.2}, 2, SymmetryAssumption::OddOnly),
                    ContractViolation);
    CHECK_THROWS_AS(certify(std::vector<double>{0.5, 0.5, 0.0}, 2), ConfigurationError);
    CHECK(symmetry_from_string(to_string(SymmetryAssumption::Both)) == SymmetryAssumption::Both);
}

TEST_CASE("single even-index conditions vanish for every palindrome") {
    for (int trial = 0; trial < 50; ++trial) {
        auto p = palindrome(1 + trial % 6);
        if (p.size() % 2 == 1) p.push_back(0.0);
        for (int k : {2, 4, 6}) CHECK(std::abs(eval_u(std::vector<int>{k}, p)) < 1e-14);
    }
}

TEST_CASE("duplicated pairs cancel the conditions with an even entry") {
    for (int trial = 0; trial < 50; ++trial) {
        const auto beta = random_vector(1 + trial % 5, -1.0, 1.0);
        std::vector<double> alpha;
        for (double b : beta) {
            alpha.push_back(b / 2);
            alpha.push_back(b / 2);
        }
        for (const auto& idx : std::vector<std::vector<int>>{{2}, {4}, {1, 2}, {1, 4}, {1, 1, 2}, {1, 2, 2}})
            CHECK(std::abs(eval_u(idx, alpha)) < 1e-14);
    }
}

TEST_CASE("BCH cross identities hold on random coefficients") {
    for (int trial = 0; trial < 100; ++trial) {
        const auto alpha = random_vector(2 * (1 + trial % 4), -1.0, 1.0);
        for (const auto& [name, residual] : cross_identities(alpha)) {
            CAPTURE(name);
            CHECK(std::abs(residual) < 1e-12);
        }
    }
}

TEST_CASE("w polynomials are power sums") {
    const std::vector<double> alpha{0.2, 0.3, -0.1, 0.6};
    const auto w = w_low_order(alpha);
    CHECK(w.w1 == doctest::Approx(1.0));
    CHECK(w.w2 == doctest::Approx(-0.04 + 0.09 - 0.01 + 0.36));
    CHECK(w.w3 == doctest::Approx(0.008 + 0.027 - 0.001 + 0.216));
}

TEST_CASE("low-order BCH coefficients of leapfrog") {
    const auto v = bch_low_order(leapfrog());
    CHECK(v.v_a == doctest::Approx(1.0));
    CHECK(v.v_b == doctest::Approx(1.0));
    CHECK(std::abs(v.v_ab) < 1e-15);
    // Symmetric second-order: the third-order coefficients are nonzero.
    CHECK(std::abs(v.v_aba) + std::abs(v.v_abb) > 1e-3);
}

TEST_CASE("fourth-order splitting methods need negative coefficients") {
    for (const auto& spec : {triple_jump(2), suzuki5(), triple_jump(3)}) {
        const auto ab = to_ab(spec);
        const auto cert = negative_coefficient_certificate(ab);
        const auto c = canonical_bab(ab);
        CHECK(cert.a_value < 0.0);
        CHECK(cert.b_value < 0.0);
        CHECK(c.a[cert.a_index] == cert.a_value);
        CHECK(c.b[cert.b_index] == cert.b_value);
    }
    CHECK_THROWS_AS(negative_coefficient_certificate(leapfrog()), PreconditionError);
}

TEST_CASE("empirical order of leapfrog on the harmonic oscillator") {
    const auto ho = harmonic_oscillator();
    const auto method = make_integrator(leapfrog(), ho.system);
    const auto study = empirical_order(method, reference_from_flow(*ho.exact_flow), State{1.0, 0.0}, 3.0,
                                       {0.1, 0.05, 0.025, 0.0125});
    CHECK(study.slope == doctest::Approx(2.0).epsilon(0.02));
    CHECK(study.points.size() == 4);
}

TEST_CASE("empirical order against a fine reference") {
    const auto hh = henon_heiles();
    const auto method = make_integrator(triple_jump(2), hh.system);
    const auto study = empirical_order(method, fine_reference(hh.system, 1e-3), State{0.0, 0.1, 0.49, 0.0}, 5.0,
                                       {0.2, 0.1, 0.05, 0.025});
    CHECK(study.slope == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("empirical order is inconclusive with too few usable points") {
    const auto ho = harmonic_oscillator();
    const auto method = make_integrator(leapfrog(), ho.system);
    CHECK_THROWS_AS(empirical_order(method, reference_from_flow(*ho.exact_flow), State{1.0, 0.0}, 1.0, {0.1, 0.05}),
                    ConfigurationError);
    // An exact integrator leaves every point at round-off, so none survive.
    const auto exact = Integrator::opaque([ho](double h, const State& x) { return (*ho.exact_flow)(h, x); }, "exact", 1,
                                          std::nullopt, 1.0);
    CHECK_THROWS_AS(empirical_order(exact, reference_from_flow(*ho.exact_flow), State{1.0, 0.0}, 1.0,
                                    {0.1, 0.05, 0.025, 0.0125}),
                    InconclusiveError);
    CHECK_THROWS_AS(loglog_fit({1.0}, {2.0}), InconclusiveError);
    const auto fit = loglog_fit({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0});
    CHECK(fit.slope == doctest::Approx(2.0));
}

TEST_CASE("v211 double sum against enumeration") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto alpha = random_vector(6, -1.0, 1.0);
        double direct = 0.0;
        for (std::size_t j2 = 1; j2 <= alpha.size(); ++j2) {
            const std::size_t star = j2 % 2 == 0 ? j2 - 1 : j2;
            double inner = 0.0;
            for (std::size_t j1 = 1; j1 <= star; ++j1) inner += alpha[j1 - 1];
            direct += (j2 % 2 == 0 ? 1.0 : -1.0) * alpha[j2 - 1] * alpha[j2 - 1] * inner * inner;
        }
        CHECK(v211(alpha) == doctest::Approx(direct).epsilon(1e-13));
    }
}
