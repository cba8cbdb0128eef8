#include "doctest.h"

#include <algorithm>
#include <set>

#include "cm/combinatorics.hpp"
#include "cm/rng.hpp"

using namespace cm;

TEST_CASE("falling factorial values and conventions") {
    CHECK(falling(5, 2) == 20);
    CHECK(falling(5, 1) == 5);
    CHECK(falling(23, 2) == 506);
    CHECK(falling(7, 3) == 210);
    CHECK(falling(4, 4) == 24);
    // zero as soon as the length exceeds the argument
    CHECK(falling(2, 3) == 0);
    CHECK(falling(0, 1) == 0);
    CHECK(falling(-3, 1) == 0);
    CHECK(falling(3, 4) == 0);
    // empty product
    CHECK(falling(0, 0) == 1);
    CHECK(falling(-5, 0) == 1);

    for (i64 m = 1; m <= 60; ++m)
        for (int r = 1; r <= 5; ++r) CHECK(falling(m, r) == m * falling(m - 1, r - 1));
}

TEST_CASE("double falling factorial values and conventions") {
    CHECK(double_falling(23, 2) == 483);
    CHECK(double_falling(7, 3) == 105);
    CHECK(double_falling(7, 4) == 105);
    CHECK(double_falling(5, 2) == 15);
    CHECK(double_falling(5, 3) == 15);
    CHECK(double_falling(9, 2) == 63);
    // hits a non-positive factor
    CHECK(double_falling(4, 3) == 0);
    CHECK(double_falling(2, 2) == 0);
    CHECK(double_falling(6, 4) == 0);
    CHECK(double_falling(0, 1) == 0);
    CHECK(double_falling(-1, 1) == 0);
    // empty product
    CHECK(double_falling(0, 0) == 1);
    CHECK(double_falling(7, 0) == 1);

    for (i64 m = 1; m <= 60; ++m)
        for (int r = 1; r <= 5; ++r)
            CHECK(double_falling(m, r) == m * double_falling(m - 2, r - 1));
}

TEST_CASE("degree sequence construction and half-edge blocks") {
    const auto ds = DegreeSequence::build({1, 1, 2});
    CHECK(ds.n() == 3);
    CHECK(ds.N == 4);
    CHECK(ds.owner(1) == 1);
    CHECK(ds.owner(2) == 2);
    CHECK(ds.owner(3) == 3);
    CHECK(ds.owner(4) == 3);
    CHECK(ds.first_half_edge(1) == 1);
    CHECK(ds.first_half_edge(3) == 3);
    CHECK(ds.degree(3) == 2);
    CHECK(ds.nk(1) == 2);
    CHECK(ds.nk(2) == 1);
    CHECK(ds.nk(0) == 0);
    CHECK(ds.nk(7) == 0);

    // the given order is preserved: a leading degree-2 vertex owns {1, 2}
    const auto ds2 = DegreeSequence::build({2, 1, 1});
    CHECK(ds2.owner(1) == 1);
    CHECK(ds2.owner(2) == 1);
    CHECK(ds2.owner(3) == 2);
    CHECK(ds2.owner(4) == 3);

    // isolated (degree-0) vertices occupy an empty block
    const auto ds0 = DegreeSequence::build({0, 1, 1});
    CHECK(ds0.N == 2);
    CHECK(ds0.first_half_edge(1) == 1);
    CHECK(ds0.first_half_edge(2) == 1);
    CHECK(ds0.owner(2) == 3);
    CHECK(ds0.nk(0) == 1);

    CHECK_THROWS_AS(DegreeSequence::build({1, 1, 1}), OddTotal);
    CHECK_THROWS_AS(DegreeSequence::build({3}), OddTotal);
}

TEST_CASE("index-set sizes: closed forms on known sequences") {
    auto counts = [](std::vector<int> d) { return class_counts(DegreeSequence::build(std::move(d))); };
    CHECK(counts({1, 1, 2}) == std::array<i64, 4>{1, 2, 1, 0});
    CHECK(counts({1, 1, 1, 1}) == std::array<i64, 4>{6, 0, 0, 0});
    CHECK(counts({3, 3}) == std::array<i64, 4>{0, 0, 6, 18});
    CHECK(counts({2, 2, 1, 1}) == std::array<i64, 4>{1, 4, 2, 2});
    CHECK(counts({2}) == std::array<i64, 4>{0, 0, 1, 0});
}

TEST_CASE("motif listing for a three-vertex sequence") {
    const auto ds = DegreeSequence::build({1, 1, 2});

    const auto edges = enumerate_motifs(ds, MotifClass::IsolatedEdge);
    REQUIRE(edges.size() == 1);
    CHECK(edges[0] == Motif::make(MotifClass::IsolatedEdge, {1, 2}));

    const auto stars = enumerate_motifs(ds, MotifClass::IsolatedTwoStar);
    REQUIRE(stars.size() == 2);
    const std::set<Motif> star_set(stars.begin(), stars.end());
    CHECK(star_set.count(Motif::make(MotifClass::IsolatedTwoStar, {1, 3}, {2, 4})) == 1);
    CHECK(star_set.count(Motif::make(MotifClass::IsolatedTwoStar, {1, 4}, {2, 3})) == 1);

    const auto loops = enumerate_motifs(ds, MotifClass::SelfLoop);
    REQUIRE(loops.size() == 1);
    CHECK(loops[0] == Motif::make(MotifClass::SelfLoop, {3, 4}));

    CHECK(enumerate_motifs(ds, MotifClass::DoubleEdge).empty());
}

TEST_CASE("motif canonical form, half-edges, vertices") {
    const auto ds = DegreeSequence::build({2, 2, 1, 1});
    const auto m = Motif::make(MotifClass::DoubleEdge, {4, 2}, {3, 1});
    CHECK(m.edge[0] == std::pair<i64, i64>{1, 3});
    CHECK(m.edge[1] == std::pair<i64, i64>{2, 4});
    CHECK(m.half_edges() == std::vector<i64>{1, 2, 3, 4});
    CHECK(m.vertices(ds) == std::vector<int>{1, 2});

    const auto loop = Motif::make(MotifClass::SelfLoop, {2, 1});
    CHECK(loop.edge[0] == std::pair<i64, i64>{1, 2});
    CHECK(loop.vertices(ds) == std::vector<int>{1});

    CHECK(edges_of(MotifClass::IsolatedEdge) == 1);
    CHECK(edges_of(MotifClass::IsolatedTwoStar) == 2);
    CHECK(edges_of(MotifClass::SelfLoop) == 1);
    CHECK(edges_of(MotifClass::DoubleEdge) == 2);
    CHECK(vertices_of(MotifClass::IsolatedEdge) == 2);
    CHECK(vertices_of(MotifClass::IsolatedTwoStar) == 3);
    CHECK(vertices_of(MotifClass::SelfLoop) == 1);
    CHECK(vertices_of(MotifClass::DoubleEdge) == 2);
}

TEST_CASE("index-set sizes match enumeration on random sequences") {
    Rng rng = make_rng(97, 0);
    int done = 0;
    while (done < 50) {
        const int n = static_cast<int>(uniform_int(rng, 2, 10));
        std::vector<int> degs(static_cast<std::size_t>(n));
        i64 total = 0;
        for (auto& d : degs) {
            d = static_cast<int>(uniform_int(rng, 0, 4));
            total += d;
        }
        if (total % 2 != 0) {
            ++degs[0];
            ++total;
        }
        const auto ds = DegreeSequence::build(degs);
        const auto closed = class_counts(ds);
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(static_cast<i64>(enumerate_motifs(ds, kMotifClasses[c]).size()) == closed[c]);
        ++done;
    }
}

TEST_CASE("success probabilities use the pairing-count ratio") {
    const auto ds = DegreeSequence::build({2, 2, 1, 1});  // N = 6
    CHECK(success_denominator(ds, MotifClass::IsolatedEdge) == 5);
    CHECK(success_denominator(ds, MotifClass::IsolatedTwoStar) == 15);
    CHECK(success_probability(ds, MotifClass::SelfLoop) == doctest::Approx(1.0 / 5.0));
    CHECK(success_probability(ds, MotifClass::DoubleEdge) == doctest::Approx(1.0 / 15.0));

    // a two-pair motif cannot fit in a two-half-edge model
    const auto tiny = DegreeSequence::build({1, 1});
    CHECK(success_denominator(tiny, MotifClass::IsolatedEdge) == 1);
    CHECK_THROWS_AS(success_probability(tiny, MotifClass::IsolatedTwoStar), DegenerateN);
}

TEST_CASE("pairwise motif relations form a chain") {
    // On a sequence with enough room, scan all pairs in all classes and check
    // common edge => shared half-edge => shared vertex, plus symmetry.
    const auto ds = DegreeSequence::build({2, 2, 1, 1, 1, 1});
    std::vector<Motif> motifs;
    for (MotifClass cls : kMotifClasses) {
        auto part = enumerate_motifs(ds, cls);
        motifs.insert(motifs.end(), part.begin(), part.end());
    }
    REQUIRE(motifs.size() >= 10);
    for (const auto& a : motifs)
        for (const auto& b : motifs) {
            const auto rel = relation(a, b, ds);
            const auto rev = relation(b, a, ds);
            CHECK(rel.shares_vertex == rev.shares_vertex);
            CHECK(rel.shares_half_edge == rev.shares_half_edge);
            CHECK(rel.shares_common_edge == rev.shares_common_edge);
            CHECK(rel.equal == rev.equal);
            if (rel.equal) CHECK(rel.shares_common_edge);
            if (rel.shares_common_edge) CHECK(rel.shares_half_edge);
            if (rel.shares_half_edge) CHECK(rel.shares_vertex);
            CHECK(rel.equal == (a == b));
        }
}

TEST_CASE("distinct two-stars can share a pair only through the same center") {
    // Six leaves around one degree-2 center: every pair of two-stars shares
    // the center vertex, and exactly those using the same (leaf, center-slot)
    // pair share a common edge.
    const auto ds = DegreeSequence::build({1, 1, 1, 2, 1, 1, 1});  // center is vertex 4
    const auto stars = enumerate_motifs(ds, MotifClass::IsolatedTwoStar);
    REQUIRE(static_cast<i64>(stars.size()) == falling(6, 2));  // (n1)_2 * n2 = 30
    int common = 0, half = 0;
    for (const auto& a : stars)
        for (const auto& b : stars) {
            if (a == b) continue;
            const auto rel = relation(a, b, ds);
            CHECK(rel.shares_vertex);  // all share the unique center
            common += rel.shares_common_edge ? 1 : 0;
            half += rel.shares_half_edge ? 1 : 0;
        }
    CHECK(common > 0);
    CHECK(half > common);
}

TEST_CASE("degree parsing") {
    CHECK(parse_degrees("3 3 2 1 # trailing comment") == std::vector<int>{3, 3, 2, 1});
    CHECK(parse_degrees("1\n2\n3\n") == std::vector<int>{1, 2, 3});
    CHECK(parse_degrees("# only a comment\n4 4") == std::vector<int>{4, 4});
    CHECK_THROWS_AS(parse_degrees("2 x 1"), ParseError);
    CHECK_THROWS_AS(parse_degrees("-1 3"), ParseError);
    CHECK_THROWS_AS(parse_degrees(""), ParseError);
}
