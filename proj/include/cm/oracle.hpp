// Exhaustive small-N ground truth: exact laws of the motif statistics, the
// conditional law given simplicity, coupling-law and pair-moment grids, and the
// left-hand sides of the variance/expectation inequalities — all in exact
// rational arithmetic.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <vector>

#include "cm/matching.hpp"
#include "cm/switching.hpp"

namespace cm::oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

std::string rat_str(const Rat& r);  // canonical "p/q"
double rat_double(const Rat& r);

// Materialize every perfect matching of 1..N (cap N <= 16; throws TooLarge).
std::vector<Matching> enumerate_matchings(i64 N);

struct SupportPoint {
    MotifStatistics stats;
    Rat prob;
};

struct ExactLaw {
    BigInt num_matchings;
    std::vector<SupportPoint> support;  // law of the statistic vector, sorted
    Rat p_simple;
    Rat mean_z_edge, mean_z_twostar, mean_s_loops, mean_m_doubles;
    // Covariance matrix of the normalized pair (W1, W2); cov_w21 == cov_w12.
    Rat cov_w11, cov_w12, cov_w22;
    std::vector<SupportPoint> conditional_simple;  // empty when p_simple == 0
};
ExactLaw exact_law(const DegreeSequence& ds);
std::string exact_law_json(const DegreeSequence& ds, const ExactLaw& law);

struct UniformCheck {
    bool vacuous = false;   // no simple outcome exists
    bool uniform = false;   // every simple graph has matching-count prod d_i!
    Rat p_simple;
    BigInt num_simple_graphs;
    std::string detail;
};
// Conditioned on simplicity, the pairing model must be uniform over simple
// graphs with matching multiplicity exactly prod d_i! (cap N <= 12).
UniformCheck uniform_simple_check(const DegreeSequence& ds);

struct CouplingLaw {
    BigInt grid_cells;    // #(base matchings containing alpha) * prod index ranges
    BigInt num_matchings; // (N-1)!!
    bool uniform = false; // each matching produced exactly once across the grid
    Rat per_matching;     // P(coupled copy = g | motif present), for any g
};
// Exact law of the switched copy given the motif is present, by full grid
// enumeration (throws TooLarge when the grid exceeds 1e7 cells).
CouplingLaw exact_coupling_law(const DegreeSequence& ds, const Motif& alpha);

struct PairMoments {
    Rat destroyed;   // E[I_a I_b (1 - J_b|a)]
    Rat created;     // E[I_a J_b|a]
    Rat cov;         // Cov(I_a, I_b)
    Rat abs_moment;  // E[I_a |I_b - J_b|a|]
};
PairMoments exact_pair_moments(const DegreeSequence& ds, const Motif& alpha, const Motif& beta);

// Exact left-hand sides of the five inequalities the bound calculator prices.
struct LhsMomentSums {
    // Sum over class pairs (j,k) of sqrt(Var(E[X_jk | W1, W2])), where X_jk =
    // sum_{a in tree class j} I_a sum_{b in tree class k} (I_b - J_b|a); also
    // the unconditioned version with Var(X_jk) (an upper envelope by Jensen).
    double variance_sum_conditional = 0.0;
    double variance_sum_unconditional = 0.0;
    Rat second_moment;        // sum_a E[I_a (sum_b |I_b - J_b|a|)^2], trees only
    Rat tree_vs_defect;       // sum_{a trees} sum_{b defects} E[I_a |I_b - J_b|a|]
    Rat defect_vs_tree;       // sum_{a defects} sum_{b trees} E[I_a |I_b - J_b|a|]
    Rat defect_pair;          // sum_{a defects} p_a^2 + sum_{a != b defects} E[I_a |I_b - J_b|a|]
};
LhsMomentSums lhs_moment_sums(const DegreeSequence& ds);

} // namespace cm::oracle
