#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "cm/stein.hpp"

using namespace cm;
using stein::Params;
using stein::TestFunction;
using stein::XVec;
using stein::YVec;

namespace {

TestFunction member(std::vector<double> a, double b, bool use_sin, TestFunction::Chi chi,
                    double c = 1.0) {
    TestFunction h;
    h.id = "manual";
    h.a = std::move(a);
    h.b = b;
    h.use_sin = use_sin;
    h.chi = chi;
    h.c = c;
    return h;
}

} // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(Params::make(3, std::vector<double>(9, 0.0), {1.0}), Error);
    CHECK_THROWS_AS(Params::make(1, {1.0, 0.0}, {1.0}), Error);
    CHECK_THROWS_AS(Params::make(1, {1.0}, {0.0}), NonpositiveLambda);
    CHECK_THROWS_AS(Params::make(1, {1.0}, {-2.0}), NonpositiveLambda);
    CHECK_THROWS_AS(Params::make(2, {1.0, 0.5, 0.2, 1.0}, {1.0}), Error);   // asymmetric
    CHECK_THROWS_AS(Params::make(2, {1.0, 2.0, 2.0, 1.0}, {1.0}), Error);   // indefinite
    const auto ok = Params::make(2, {1.0, 1.0, 1.0, 1.0}, {0.5, 2.0});      // rank one
    CHECK(ok.sig(0, 1) == 1.0);
    CHECK(ok.r() == 2);
}

TEST_CASE("counting kernel endpoints and normalization") {
    const std::vector<double> lam = {1.5};
    // s = 0: point mass at the start
    CHECK(stein::transition({3}, {3}, 0.0, lam) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stein::transition({3}, {2}, 0.0, lam) == doctest::Approx(0.0));
    // s = 1: stationary Poisson regardless of the start
    for (long long z = 0; z <= 6; ++z) {
        const double pois = std::exp(-1.5) * std::pow(1.5, static_cast<double>(z)) /
                            std::tgamma(static_cast<double>(z) + 1.0);
        CHECK(stein::transition({3}, {z}, 1.0, lam) == doctest::Approx(pois).epsilon(1e-12));
        CHECK(stein::transition({0}, {z}, 1.0, lam) == doctest::Approx(pois).epsilon(1e-12));
    }
    // every time slice is a probability measure
    for (double s : {0.1, 0.4, 0.8}) {
        double total = 0.0;
        for (long long z = 0; z <= 40; ++z) total += stein::transition({3}, {z}, s, lam);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
    // product form over two coordinates
    const std::vector<double> lam2 = {0.5, 2.0};
    const double joint = stein::transition({2, 1}, {1, 2}, 0.6, lam2);
    const double split = stein::transition({2}, {1}, 0.6, {0.5}) *
                         stein::transition({1}, {2}, 0.6, {2.0});
    CHECK(joint == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("kernel values stay under the truncation envelope") {
    for (double lambda : {0.5, 1.5}) {
        for (long long y : {0LL, 3LL}) {
            for (long long z = 0; z <= 12; ++z) {
                const double env = stein::transition_envelope(y, z, lambda);
                for (double s : {0.0, 0.3, 0.7, 1.0})
                    CHECK(stein::transition({y}, {z}, s, {lambda}) <= env + 1e-12);
            }
        }
    }
    CHECK(stein::transition_envelope(5, 3, 2.0) == 1.0);
    CHECK(stein::transition_envelope(2, 4, 1.0) == doctest::Approx(0.5));  // 1/2!
}

TEST_CASE("interpolation endpoints: the function itself and its equilibrium mean") {
    const auto P = Params::make(2, {1.0, 0.0, 0.0, 1.0}, {0.5, 2.0});
    const std::vector<TestFunction> hs = {
        member({0.6, -0.48}, 0.3, true, TestFunction::Chi::One),
        member({0.0, 1.0}, -0.2, false, TestFunction::Chi::IndicatorZero),
        member({0.70710678118654752, 0.70710678118654752}, 0.9, true,
               TestFunction::Chi::ExpDecay, 0.7),
        member({1.0, 0.0}, 0.0, false, TestFunction::Chi::CosSum, 0.9),
    };
    const XVec x = {0.8, -1.1};
    const YVec y = {2, 1};
    for (const auto& h : hs) {
        CHECK(stein::interpolate(h, x, y, 0.0, P) == doctest::Approx(h(x, y)).epsilon(1e-9));
        CHECK(stein::interpolate(h, x, y, 1.0, P) ==
              doctest::Approx(stein::reference_expectation(h, P)).epsilon(1e-9));
    }
}

TEST_CASE("interpolation matches the separable closed form") {
    // h = sin(a.x + b) 1{y = 0}:
    //   T_s h = e^{-s q/2} sin(sqrt(1-s) a.x + b) prod_j s^{y_j} e^{-lambda_j s}
    const auto P = Params::make(2, {1.0, 0.3, 0.3, 0.8}, {0.5, 2.0});
    const auto h = member({0.6, -0.48}, 0.3, true, TestFunction::Chi::IndicatorZero);
    const double q = 0.6 * 0.6 * 1.0 + 2 * 0.6 * (-0.48) * 0.3 + 0.48 * 0.48 * 0.8;
    const XVec x = {0.7, 1.2};
    const double ax = 0.6 * 0.7 - 0.48 * 1.2;
    for (double s : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        for (const YVec& y : {YVec{0, 0}, YVec{1, 0}, YVec{2, 3}}) {
            double expect = std::exp(-s * q / 2.0) * std::sin(std::sqrt(1.0 - s) * ax + 0.3);
            expect *= std::pow(s, static_cast<double>(y[0] + y[1])) *
                      std::exp(-(0.5 + 2.0) * s);
            CHECK(stein::interpolate(h, x, y, s, P) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("generic quadrature interpolation agrees with the separable fast path") {
    const auto P = Params::make(2, {1.0, 0.5, 0.5, 2.0}, {0.5, 2.0});
    const auto h = member({0.6, 0.6}, -0.4, false, TestFunction::Chi::ExpDecay, 0.7);
    const auto h_fn = [&](const XVec& x, const YVec& y) { return h(x, y); };
    const XVec x = {0.4, -0.9};
    const YVec y = {1, 2};
    const YVec caps = {40, 40};
    for (double s : {0.15, 0.5, 0.85}) {
        const double fast = stein::interpolate(h, x, y, s, P);
        const double generic = stein::interpolate_generic(h_fn, x, y, s, P, caps);
        CHECK(generic == doctest::Approx(fast).epsilon(5e-7));
    }
}

TEST_CASE("equilibrium means have their closed forms") {
    const auto P = Params::make(1, {2.0}, {1.3});
    const double q = 0.64 * 2.0;  // a = 0.8
    const auto one = member({0.8}, 0.5, true, TestFunction::Chi::One);
    CHECK(stein::reference_expectation(one, P) ==
          doctest::Approx(std::exp(-q / 2.0) * std::sin(0.5)).epsilon(1e-14));

    const auto at0 = member({0.8}, 0.5, false, TestFunction::Chi::IndicatorZero);
    CHECK(stein::reference_expectation(at0, P) ==
          doctest::Approx(std::exp(-q / 2.0) * std::cos(0.5) * std::exp(-1.3)).epsilon(1e-14));

    // E exp(-c Y) = exp(lambda (e^{-c} - 1))
    const auto dec = member({0.8}, 0.5, true, TestFunction::Chi::ExpDecay, 0.7);
    CHECK(stein::reference_expectation(dec, P) ==
          doctest::Approx(std::exp(-q / 2.0) * std::sin(0.5) *
                          std::exp(1.3 * (std::exp(-0.7) - 1.0)))
              .epsilon(1e-14));

    // E cos(c Y) = exp(lambda (cos c - 1)) cos(lambda sin c)
    const auto cs = member({0.8}, 0.5, true, TestFunction::Chi::CosSum, 0.9);
    CHECK(stein::reference_expectation(cs, P) ==
          doctest::Approx(std::exp(-q / 2.0) * std::sin(0.5) *
                          std::exp(1.3 * (std::cos(0.9) - 1.0)) * std::cos(1.3 * std::sin(0.9)))
              .epsilon(1e-14));
}

TEST_CASE("solving for a constant test function gives the zero solution") {
    const auto P = Params::make(1, {1.0}, {1.0});
    const auto h = member({0.0}, 0.3, false, TestFunction::Chi::One);
    CHECK(std::abs(stein::solve(h, {0.7}, {2}, P)) <= 1e-10);
    CHECK(std::abs(stein::solve(h, {-1.4}, {0}, P)) <= 1e-10);
}

TEST_CASE("a y-only test function has an x-independent solution") {
    const auto P = Params::make(1, {1.0}, {0.8});
    const auto h = member({0.0}, 0.0, false, TestFunction::Chi::ExpDecay, 0.7);
    const double f1 = stein::solve(h, {0.5}, {1}, P, 1e-10);
    const double f2 = stein::solve(h, {-1.3}, {1}, P, 1e-10);
    CHECK(f1 == doctest::Approx(f2).epsilon(1e-9));
    CHECK(std::abs(f1) > 1e-4);  // and it is not trivially zero
}

TEST_CASE("characterization operator on polynomial probes") {
    const auto P = Params::make(1, {1.0}, {1.0});

    // f = x^2: second-derivative term 2 sigma, drift -2x^2, no y terms
    const auto fx2 = [](const XVec& x, const YVec&) { return x[0] * x[0]; };
    CHECK(stein::generator_apply(fx2, {0.7}, {1}, P) ==
          doctest::Approx(2.0 - 2.0 * 0.49).epsilon(1e-5));

    // f = y: pure birth-death part 2 (lambda - y)
    const auto fy = [](const XVec&, const YVec& y) { return static_cast<double>(y[0]); };
    CHECK(stein::generator_apply(fy, {0.0}, {3}, P) == doctest::Approx(-4.0).epsilon(1e-7));
    CHECK(stein::generator_apply(fy, {0.0}, {0}, P) == doctest::Approx(2.0).epsilon(1e-7));

    // f = x y: mixes drift and jumps, A f = -xy + 2x(lambda - y)
    const auto fxy = [](const XVec& x, const YVec& y) {
        return x[0] * static_cast<double>(y[0]);
    };
    CHECK(stein::generator_apply(fxy, {0.5}, {2}, P) ==
          doctest::Approx(-0.5 * 2.0 + 2.0 * 0.5 * (1.0 - 2.0)).epsilon(1e-5));
}

TEST_CASE("numerical solution satisfies the characterization equation") {
    const auto P = Params::make(1, {1.0}, {1.0});
    const auto h = member({1.0}, 0.3, true, TestFunction::Chi::ExpDecay, 0.7);
    const double res = stein::generator_residual(h, {0.4}, {1}, P);
    CHECK(res <= 5e-3);
}

TEST_CASE("shifted-Poisson total variation identity") {
    CHECK(stein::poisson_unimodal_tv(1.0) ==
          doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-13));
    CHECK(stein::poisson_unimodal_tv(0.5) ==
          doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-13));
    // floor(2.3) = 2: 2 e^{-2.3} 2.3^2 / 2
    CHECK(stein::poisson_unimodal_tv(2.3) ==
          doctest::Approx(std::exp(-2.3) * 2.3 * 2.3).epsilon(1e-13));
    const double tv77 = stein::poisson_unimodal_tv(7.7);
    CHECK(tv77 > 0.0);
    CHECK(tv77 < 1.0);
    CHECK_THROWS_AS(stein::poisson_unimodal_tv(0.0), NonpositiveLambda);
    CHECK_THROWS_AS(stein::poisson_unimodal_tv(-1.0), NonpositiveLambda);
}

TEST_CASE("dictionary members are admissible and distinct") {
    for (int d : {1, 2}) {
        const auto dict = stein::make_dictionary(d, d, 12);
        REQUIRE(dict.size() == 12);
        std::set<std::string> ids;
        bool has_at0 = false, has_plain = false;
        for (const auto& h : dict) {
            CHECK(h.a.size() == static_cast<std::size_t>(d));
            CHECK(h.a_norm() <= 1.0 + 1e-12);
            ids.insert(h.id);
            has_at0 = has_at0 || h.zero_off_zero();
            has_plain = has_plain || h.constant_in_y();
        }
        CHECK(ids.size() == 12);  // no duplicate labels
        CHECK(has_at0);
        CHECK(has_plain);
    }

    const auto xdict = stein::make_x_dictionary(2, 8);
    REQUIRE(xdict.size() == 8);
    for (const auto& h : xdict) {
        CHECK(h.constant_in_y());
        CHECK(h.a_norm() <= 1.0 + 1e-12);
    }
}

TEST_CASE("hermite rule integrates low moments of the standard normal") {
    std::vector<double> t, w;
    stein::gauss_hermite_64(t, w);
    REQUIRE(t.size() == 64);
    REQUIRE(w.size() == 64);
    double m0 = 0, m1 = 0, m2 = 0, m4 = 0, mc = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        m0 += w[i];
        m1 += w[i] * t[i];
        m2 += w[i] * t[i] * t[i];
        m4 += w[i] * t[i] * t[i] * t[i] * t[i];
        mc += w[i] * std::cos(t[i]);
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m1 == doctest::Approx(0.0).scale(1).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(mc == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature on a known integral") {
    const double got = stein::adaptive_simpson([](double u) { return std::exp(-u * u); },
                                               0.0, 1.0, 1e-12);
    CHECK(got == doctest::Approx(0.74682413281242702).epsilon(1e-11));
}

TEST_CASE("an impossible truncation budget is reported, not silently degraded") {
    const auto P = Params::make(1, {1.0}, {2.0});
    const auto h = member({0.5}, 0.0, true, TestFunction::Chi::ExpDecay, 0.7);
    CHECK_THROWS_AS(stein::interpolate(h, {0.0}, {2000}, 0.5, P), BudgetExceeded);
}

TEST_CASE("smoothness probe rows carry finite measurements and their bounds") {
    const auto P = Params::make(1, {1.0}, {1.0});
    const auto dict = stein::make_dictionary(1, 1, 4);
    const std::vector<std::pair<XVec, YVec>> grid = {{{0.4}, {0}}, {{-0.8}, {2}}};
    const auto rows = stein::smoothness_probe(P, dict, grid);
    REQUIRE(!rows.empty());
    std::set<std::string> quantities;
    for (const auto& row : rows) {
        CHECK(std::isfinite(row.measured));
        CHECK(row.bound >= 0.0);
        CHECK(row.margin == doctest::Approx(row.bound - row.measured).epsilon(1e-12));
        quantities.insert(row.quantity);
    }
    CHECK(quantities.count("lip_x") == 1);
    CHECK(quantities.count("dy2_uniform") == 1);
    const auto csv = stein::probe_csv(rows);
    CHECK(csv.find("quantity") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size()) + 1);
}
