#include "doctest.h"

#include <cmath>
#include <vector>

#include "cm/oracle.hpp"
#include "cm/theory.hpp"

using namespace cm;

namespace {
DegreeSequence regular(int n, int d) {
    return DegreeSequence::build(std::vector<int>(static_cast<std::size_t>(n), d));
}
} // namespace

TEST_CASE("defect rates on pinned sequences") {
    const auto cubic8 = theory::moment_parameters(regular(8, 3));
    CHECK(cubic8.lambda_s == doctest::Approx(24.0 / 23.0).epsilon(1e-14));
    CHECK(cubic8.lambda_m == doctest::Approx(24.0 / 23.0).epsilon(1e-14));

    const auto small = theory::moment_parameters(DegreeSequence::build({1, 1, 2}));
    CHECK(small.lambda_s == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(small.lambda_m == 0.0);
    CHECK_FALSE(small.nu.has_value());  // third-moment ratios need N > 7

    const auto deg = theory::moment_parameters(DegreeSequence::build({1, 1, 1, 1}));
    CHECK(deg.lambda_s == 0.0);
    CHECK(deg.lambda_m == 0.0);
}

TEST_CASE("closed-form covariance matches the exhaustive law") {
    for (const auto& degs : {std::vector<int>{1, 1, 2}, {2, 2, 1, 1}, {3, 2, 2, 1}}) {
        const auto ds = DegreeSequence::build(degs);
        const auto law = oracle::exact_law(ds);
        const auto sig = theory::covariance(ds);
        CHECK(sig[0] == doctest::Approx(oracle::rat_double(law.cov_w11)).epsilon(1e-12));
        CHECK(sig[1] == doctest::Approx(oracle::rat_double(law.cov_w12)).epsilon(1e-12));
        CHECK(sig[1] == sig[2]);
        CHECK(sig[3] == doctest::Approx(oracle::rat_double(law.cov_w22)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate covariances vanish exactly") {
    // all degree-1: every pairing has the same edge count, so Var(W1) = 0.
    // The three contributing terms cancel only in exact arithmetic; the
    // double-precision evaluation is left with rounding residue.
    const auto sig = theory::covariance(DegreeSequence::build({1, 1, 1, 1}));
    CHECK(std::abs(sig[0]) <= 1e-15);
    // no degree-2 vertices: the two-star column is identically zero
    CHECK(sig[1] == 0.0);
    CHECK(sig[3] == 0.0);

    const auto sig2 = theory::covariance(regular(4, 3));
    CHECK(sig2[0] == 0.0);
    CHECK(sig2[1] == 0.0);
    CHECK(sig2[3] == 0.0);
}

TEST_CASE("defect proximity bound needs more than a handful of half-edges") {
    CHECK_THROWS_AS(theory::delta_simple(DegreeSequence::build({1, 1, 2})), NeedsLargerN);
    CHECK_THROWS_AS(theory::delta_simple(DegreeSequence::build({3, 3})), NeedsLargerN);
    CHECK(theory::delta_simple(regular(8, 3)) > 0.0);
}

TEST_CASE("defect proximity bound roughly halves when a cubic sequence doubles") {
    // Start the ladder at n = 32: below that the small-sample corrections in
    // the moment prices shrink faster than 1/n and the ratio dips under 0.4.
    double prev = theory::delta_simple(regular(32, 3));
    for (int n : {64, 128, 256}) {
        const double cur = theory::delta_simple(regular(n, 3));
        CHECK(cur / prev > 0.40);
        CHECK(cur / prev < 0.60);
        prev = cur;
    }
}

TEST_CASE("explicit constants at pinned arguments") {
    const auto at0 = theory::constants(0.0, 1.0, 1.0);
    CHECK(at0.big_c == 0.0);
    CHECK(at0.c_prime == doctest::Approx(0.0));
    CHECK(at0.c1 == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));

    const auto at1 = theory::constants(1.0, 1.0, 1.0);
    // C'(1,1,1) = (1+6) + (2+8) + 1 = 18
    CHECK(at1.c_prime == doctest::Approx(18.0).epsilon(1e-14));
    CHECK(at1.big_c == doctest::Approx(0.5 * at1.c1 + 4.0 / 3.0 + 6.0).epsilon(1e-14));
    CHECK(at1.big_c > 0.0);

    // monotone in the coupling constant
    CHECK(theory::constants(2.0, 1.0, 1.0).big_c > at1.big_c);
    CHECK(theory::constants(2.0, 1.0, 1.0).c_prime > at1.c_prime);
}

TEST_CASE("report fields on the twenty-vertex mixed profile") {
    std::vector<int> degs;
    degs.insert(degs.end(), 10, 1);
    degs.insert(degs.end(), 5, 2);
    degs.insert(degs.end(), 4, 3);
    degs.insert(degs.end(), 1, 4);
    const auto ds = DegreeSequence::build(degs);
    REQUIRE(ds.N == 36);
    const auto rep = theory::approximation_bounds(ds);

    CHECK(rep.n == 20);
    CHECK(rep.n1 == 10);
    CHECK(rep.n2 == 5);
    REQUIRE(rep.c_star.has_value());
    CHECK(*rep.c_star == doctest::Approx(2.0).epsilon(1e-14));  // 10/(20-15)

    // lambda_s = 23/35, lambda_m = 452/1155
    CHECK(rep.moments.lambda_s == doctest::Approx(23.0 / 35.0).epsilon(1e-13));
    CHECK(rep.moments.lambda_m == doctest::Approx(452.0 / 1155.0).epsilon(1e-13));

    REQUIRE(rep.bound_a.value.has_value());
    CHECK(*rep.bound_a.value > 0.0);
    REQUIRE(rep.bound_b.value.has_value());

    // the simplicity lower bound is negative here, so conditional bounds are off
    REQUIRE(rep.l_n.has_value());
    CHECK(*rep.l_n < 0.0);
    CHECK_FALSE(rep.bound_c.value.has_value());
    CHECK_FALSE(rep.bound_c2.value.has_value());
    CHECK_FALSE(rep.bound_c.why.empty());
}

TEST_CASE("bound preconditions are reported, not fudged") {
    // too few vertices/half-edges overall
    const auto tiny = theory::approximation_bounds(DegreeSequence::build({1, 1, 2}));
    CHECK_FALSE(tiny.bound_a.value.has_value());
    CHECK_FALSE(tiny.bound_a.why.empty());
    CHECK_FALSE(tiny.bound_b.value.has_value());

    // regular sequences have no degree-1 vertices
    const auto cubic = theory::approximation_bounds(regular(32, 3));
    CHECK_FALSE(cubic.bound_a.value.has_value());
    CHECK(cubic.bound_a.why.find("n1") != std::string::npos);
    // ...but the simplicity-probability bound still engages
    REQUIRE(cubic.bound_b.value.has_value());
    CHECK(*cubic.bound_b.value > 0.0);

    // dominant low degrees: n0 + n1 > n - 2
    std::vector<int> pendant(30, 1);
    pendant.push_back(15);
    pendant.push_back(17);  // n = 32, N = 62, n0+n1 = 30 = n - 2 boundary holds
    const auto edge_case = theory::approximation_bounds(DegreeSequence::build(pendant));
    CHECK(edge_case.bound_a.value.has_value());

    std::vector<int> pendant2(31, 1);
    pendant2.push_back(31);  // n = 32, n0+n1 = 31 > 30
    const auto over = theory::approximation_bounds(DegreeSequence::build(pendant2));
    CHECK_FALSE(over.bound_a.value.has_value());
    CHECK(over.bound_a.why.find("n0 + n1") != std::string::npos);
}

TEST_CASE("simplicity probability obeys its Poisson approximation bound exactly") {
    for (const auto& degs : {std::vector<int>{3, 3, 1, 1}, {4, 2, 1, 1}, {2, 2, 2, 1, 1},
                             {2, 2, 2, 2}, {2, 2, 2, 2, 2}, {3, 3, 2, 2}}) {
        const auto ds = DegreeSequence::build(degs);
        const auto rep = theory::approximation_bounds(ds);
        REQUIRE(rep.bound_b.value.has_value());
        const auto law = oracle::exact_law(ds);
        const double gap =
            std::abs(oracle::rat_double(law.p_simple) - rep.p_simple_poisson);
        CHECK(gap <= *rep.bound_b.value + 1e-12);
    }
}

TEST_CASE("report JSON is well-formed and carries the bounds") {
    const auto rep = theory::approximation_bounds(regular(32, 3));
    const auto text = theory::theory_report_json(rep);
    CHECK(text.find("\"bound_a\"") != std::string::npos);
    CHECK(text.find("\"bound_b\"") != std::string::npos);
    CHECK(text.find("\"lambda_s\"") != std::string::npos);
    // a regular sequence has no degree-1 vertices, so the normal-part bound is
    // absent and the diagnostics map must say why
    CHECK(text.find("\"diagnostics\"") != std::string::npos);
    CHECK(text.find("n1 == 0") != std::string::npos);
}

TEST_CASE("two-law comparison bound") {
    const std::array<double, 4> s1 = {1, 0, 0, 1};
    const std::array<double, 4> s2 = {0.9, 0.1, 0.1, 1.2};
    CHECK(theory::comparison_bound(s1, {1.0, 2.0}, s1, {1.0, 2.0}) == 0.0);
    CHECK(theory::comparison_bound(s1, {1.0, 2.0}, s2, {1.5, 1.8}) ==
          doctest::Approx(0.25 + 1.4).epsilon(1e-14));
    CHECK_THROWS_AS(theory::comparison_bound(s1, {1.0}, s2, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(theory::comparison_bound(s1, {0.0, 2.0}, s2, {1.0, 2.0}),
                    NonpositiveLambda);
}

TEST_CASE("finite covariance approaches the ensemble limit") {
    // alternating degrees 1 and 2: pmf (0, 1/2, 1/2), mean 3/2
    const auto limit = theory::asymptotic_sigma({0.0, 0.5, 0.5}, 1.5);
    std::vector<int> degs;
    for (int i = 0; i < 2000; ++i) {
        degs.push_back(1);
        degs.push_back(2);
    }
    const auto sig = theory::covariance(DegreeSequence::build(degs));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(sig[k] - limit[k]) < 2e-3);

    // the limiting edge variance factors as p1^2 (mu - p1)^2 / (2 mu^3)
    auto s11 = [](double p1, double mu) {
        return p1 * p1 * (mu - p1) * (mu - p1) / (2.0 * mu * mu * mu);
    };
    CHECK(limit[0] == doctest::Approx(s11(0.5, 1.5)).epsilon(1e-14));
    const auto more_leaves = theory::asymptotic_sigma({0.0, 0.8, 0.2}, 1.2);
    CHECK(more_leaves[0] == doctest::Approx(s11(0.8, 1.2)).epsilon(1e-14));
    // pushing mass toward degree 1 makes the edge count rigid (in the all-leaf
    // limit every vertex pairs into an isolated edge), so the variance drops
    CHECK(more_leaves[0] < limit[0]);
}

TEST_CASE("smallest eigenvalue of a symmetric pair") {
    CHECK(theory::min_eigenvalue_2x2(1, 0, 1) == doctest::Approx(1.0));
    CHECK(theory::min_eigenvalue_2x2(1, 1, 1) == doctest::Approx(0.0));
    CHECK(theory::min_eigenvalue_2x2(2, 0, 3) == doctest::Approx(2.0));
    CHECK(theory::min_eigenvalue_2x2(1, 2, 1) == doctest::Approx(-1.0));
}
