#include "doctest.h"

#include <cmath>

#include "cm/oracle.hpp"
#include "cm/theory.hpp"

using namespace cm;
using oracle::Rat;

TEST_CASE("rational helpers") {
    CHECK(oracle::rat_str(Rat(2, 6)) == "1/3");
    CHECK(oracle::rat_str(Rat(5)) == "5/1");
    CHECK(oracle::rat_double(Rat(1, 4)) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("exact law of a three-vertex sequence") {
    const auto ds = DegreeSequence::build({1, 1, 2});
    const auto law = oracle::exact_law(ds);
    CHECK(law.num_matchings == 3);
    CHECK(law.p_simple == Rat(2, 3));
    CHECK(law.mean_z_edge == Rat(1, 3));
    CHECK(law.mean_z_twostar == Rat(2, 3));
    CHECK(law.mean_s_loops == Rat(1, 3));
    CHECK(law.mean_m_doubles == 0);

    // support: {edge+loop} with prob 1/3, {two-star} with prob 2/3 (two pairings)
    REQUIRE(law.support.size() == 2);
    Rat total = 0;
    for (const auto& pt : law.support) total += pt.prob;
    CHECK(total == 1);

    // conditioned on simplicity only the two-star outcome survives
    REQUIRE(law.conditional_simple.size() == 1);
    CHECK(law.conditional_simple[0].stats.z_twostar == 1);
    CHECK(law.conditional_simple[0].prob == 1);
}

TEST_CASE("exact law of the two-vertex cubic sequence") {
    const auto ds = DegreeSequence::build({3, 3});
    const auto law = oracle::exact_law(ds);
    CHECK(law.num_matchings == 15);
    CHECK(law.p_simple == 0);
    CHECK(law.conditional_simple.empty());
    // mean loop count 12/(2*5), mean parallel-pair count 36/(2*15)
    CHECK(law.mean_s_loops == Rat(6, 5));
    CHECK(law.mean_m_doubles == Rat(6, 5));
}

TEST_CASE("law means match the rate formulas on several sequences") {
    for (const auto& degs : {std::vector<int>{2, 2, 1, 1}, {3, 2, 1}, {2, 2, 2}, {4, 2, 1, 1}}) {
        const auto ds = DegreeSequence::build(degs);
        const auto law = oracle::exact_law(ds);
        const auto m = theory::moment_parameters(ds);
        CHECK(oracle::rat_double(law.mean_s_loops) == doctest::Approx(m.lambda_s).epsilon(1e-13));
        CHECK(oracle::rat_double(law.mean_m_doubles) == doctest::Approx(m.lambda_m).epsilon(1e-13));
    }
}

TEST_CASE("exact law JSON carries the headline numbers") {
    const auto ds = DegreeSequence::build({1, 1, 2});
    const auto law = oracle::exact_law(ds);
    const auto text = oracle::exact_law_json(ds, law);
    CHECK(text.find("\"p_simple\"") != std::string::npos);
    CHECK(text.find("2/3") != std::string::npos);
    CHECK(text.find("\"num_matchings\"") != std::string::npos);
}

TEST_CASE("conditional law is uniform over simple graphs") {
    for (const auto& degs : {std::vector<int>{1, 1, 2}, {2, 2, 1, 1}, {2, 2, 2}, {3, 2, 2, 1}}) {
        const auto chk = oracle::uniform_simple_check(DegreeSequence::build(degs));
        CHECK_FALSE(chk.vacuous);
        CHECK(chk.uniform);
        CHECK(chk.p_simple > 0);
        CHECK(chk.num_simple_graphs > 0);
    }
    // no simple outcome at all: vacuously uniform
    const auto none = oracle::uniform_simple_check(DegreeSequence::build({3, 3}));
    CHECK(none.vacuous);
    CHECK(none.uniform);
    CHECK(none.p_simple == 0);
}

TEST_CASE("coupling law is uniform for a planted loop") {
    const auto ds = DegreeSequence::build({2, 2, 1, 1});
    const auto alpha = Motif::make(MotifClass::SelfLoop, {1, 2});
    const auto law = oracle::exact_coupling_law(ds, alpha);
    CHECK(law.uniform);
    CHECK(law.num_matchings == 15);
    CHECK(law.per_matching == Rat(1, 15));
    // 3 matchings contain the loop, stage range 5: the grid covers all 15
    CHECK(law.grid_cells == 15);
}

TEST_CASE("pair moments: two disjoint edges on four leaves") {
    const auto ds = DegreeSequence::build({1, 1, 1, 1});
    const auto a = Motif::make(MotifClass::IsolatedEdge, {1, 2});
    const auto b = Motif::make(MotifClass::IsolatedEdge, {3, 4});
    const auto mom = oracle::exact_pair_moments(ds, a, b);
    CHECK(mom.destroyed == Rat(2, 9));
    CHECK(mom.created == Rat(1, 9));  // = p_a p_b (switch independence)
    CHECK(mom.cov == Rat(2, 9));      // 1/3 - 1/9
    // either edge forces the other here, so |I - J| reduces to destruction
    CHECK(mom.abs_moment == Rat(2, 9));
}

TEST_CASE("pair moments: overlapping motifs exclude each other") {
    const auto ds = DegreeSequence::build({1, 1, 2});
    const auto a = Motif::make(MotifClass::IsolatedEdge, {1, 2});
    const auto loop = Motif::make(MotifClass::SelfLoop, {3, 4});
    // edge and loop coexist (they use disjoint half-edges and I_edge=1 forces
    // the loop), so E[I_a I_b] = 1/3 while p_a p_b = 1/9
    const auto mom = oracle::exact_pair_moments(ds, a, loop);
    CHECK(mom.cov == Rat(1, 3) - Rat(1, 9));
    CHECK(mom.created == Rat(1, 9));

    // the edge and a two-star share half-edges, so they never coexist
    const auto star = Motif::make(MotifClass::IsolatedTwoStar, {1, 3}, {2, 4});
    const auto mom2 = oracle::exact_pair_moments(ds, a, star);
    CHECK(mom2.destroyed == 0);
    CHECK(mom2.cov == 0 - Rat(1, 3) * Rat(1, 3));
}

TEST_CASE("inequality left-hand sides on the three-vertex sequence") {
    const auto ds = DegreeSequence::build({1, 1, 2});
    const auto lhs = oracle::lhs_moment_sums(ds);
    // tree-vs-defect and defect-vs-tree sums agree exactly
    CHECK(lhs.tree_vs_defect == Rat(4, 9));
    CHECK(lhs.defect_vs_tree == Rat(4, 9));
    CHECK(lhs.second_moment >= 0);
    CHECK(lhs.defect_pair >= 0);
    CHECK(lhs.variance_sum_conditional >= 0.0);
    CHECK(lhs.variance_sum_unconditional + 1e-12 >= lhs.variance_sum_conditional);
}

TEST_CASE("measured left-hand sides stay under the priced right-hand sides") {
    // all with N = 8: the prices with (N-3) and (N-7) denominators engage
    for (const auto& degs :
         {std::vector<int>{3, 3, 1, 1}, {4, 2, 1, 1}, {2, 2, 2, 1, 1}, {2, 2, 2, 2}}) {
        const auto ds = DegreeSequence::build(degs);
        const auto lhs = oracle::lhs_moment_sums(ds);
        const auto rhs = theory::moment_bound_rhs(ds);

        REQUIRE(rhs.second_moment.value.has_value());
        CHECK(oracle::rat_double(lhs.second_moment) <= *rhs.second_moment.value + 1e-12);

        REQUIRE(rhs.tree_vs_defect.value.has_value());
        CHECK(oracle::rat_double(lhs.tree_vs_defect) <= *rhs.tree_vs_defect.value + 1e-12);
        REQUIRE(rhs.defect_vs_tree.value.has_value());
        CHECK(oracle::rat_double(lhs.defect_vs_tree) <= *rhs.defect_vs_tree.value + 1e-12);
        CHECK(lhs.tree_vs_defect == lhs.defect_vs_tree);

        REQUIRE(rhs.defect_pair.value.has_value());
        CHECK(oracle::rat_double(lhs.defect_pair) <= *rhs.defect_pair.value + 1e-12);

        // the variance-sum price needs min(n,N) > 15, absent on these sizes
        CHECK_FALSE(rhs.variance_sum.value.has_value());
        CHECK_FALSE(rhs.variance_sum.why.empty());
    }
}

TEST_CASE("enumerating matchings beyond the cap is rejected") {
    CHECK_THROWS_AS(oracle::enumerate_matchings(18), TooLarge);
    CHECK(oracle::enumerate_matchings(4).size() == 3);
}
