// Closed-form side of the toolkit: exact finite-n covariance of the normalized
// tree counts, defect rates, the explicit constants, the three normal /
// conditional-normal error bounds, the per-inequality right-hand sides, the
// two-distribution comparison bound, and the asymptotic covariance.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cm/combinatorics.hpp"

namespace cm::theory {

// Rates and moment ratios entering the bounds:
//   lambda_s = sum_i (d_i)_2 / (2(N-1))            mean self-loop count
//   lambda_m = sum_{i<j} (d_i)_2 (d_j)_2 / (2 ((N-1))_2)   mean double-edge count
//   nu   = sum_i (d_i)_2 / (N-7)
//   mu3  = sum_i (d_i)_3 / (N-7)
//   mu4  = sum_i (d_i)_4 / (N-7)
// nu/mu3/mu4 exist only when N > 7 (NeedsLargerN otherwise).
struct MomentParameters {
    double lambda_s = 0.0;
    double lambda_m = 0.0;
    std::optional<double> nu, mu3, mu4;
};
MomentParameters moment_parameters(const DegreeSequence& ds);

// Exact covariance matrix of (W1, W2) = ((z_edge - E)/sqrt(n), (z_twostar - E)/sqrt(n))
// in a uniform pairing, as {s11, s12, s21, s22}.  Each closed-form term enters
// only when its pair-count factor is positive.
std::array<double, 4> covariance(const DegreeSequence& ds);

// Aggregate defect proximity bound; throws NeedsLargerN when N <= 7.
double delta_simple(const DegreeSequence& ds);

// Explicit constants: big_c is the full coupling constant C(c), c_prime the
// tree-versus-defect constant C'(c, lambda_s, lambda_m), and c1 the bare
// four-radical sum (so big_c = (c/2) c1 + (4/3) c^2 + 6 c^3).
struct Constants {
    double big_c = 0.0;
    double c_prime = 0.0;
    double c1 = 0.0;
};
Constants constants(double c, double lambda_s, double lambda_m);

// One bound with its precondition diagnostic: value engaged iff `why` is empty.
struct BoundPart {
    std::optional<double> value;
    std::string why;  // non-empty: precondition that failed
};

struct TheoryReport {
    int n = 0;
    i64 N = 0;
    i64 n0 = 0, n1 = 0, n2 = 0;
    std::array<double, 4> sigma{};  // {s11, s12, s21, s22}
    MomentParameters moments;
    std::optional<double> delta;    // needs N > 7
    std::optional<double> c_star;   // (n1 v n2)/(min(n,N) - 15), needs min(n,N) > 15
    std::optional<double> big_c, c_prime;
    std::optional<double> l_n;      // e^{-lambda} - bound_b, needs bound_b
    double p_simple_poisson = 0.0;  // e^{-lambda_s - lambda_m}
    BoundPart bound_a;   // unconditional normal-Poisson dictionary bound
    BoundPart bound_b;   // |P(simple) - e^{-lambda}| bound
    BoundPart bound_c;   // conditional bound, full form
    BoundPart bound_c2;  // conditional bound, compact form
};
TheoryReport approximation_bounds(const DegreeSequence& ds);
std::string theory_report_json(const TheoryReport& r);

// Right-hand sides of the five supporting inequalities, each with the minimal
// admissible constant for its own denominator (N-15, N-3, N-7, N-7, N-7).
struct MomentBounds {
    BoundPart variance_sum;   // C1(c) (n1 v n2)/sqrt(N-1)
    BoundPart second_moment;  // (8c + 36c^2)(n1 v n2)
    BoundPart tree_vs_defect; // (c^2+6c^3) lambda_s + (2c^2+8c^3) lambda_m + c^3
    BoundPart defect_vs_tree; // identical value to tree_vs_defect
    BoundPart defect_pair;    // delta_simple
};
MomentBounds moment_bound_rhs(const DegreeSequence& ds);

// Smoothness-transfer comparison: |E h(Z,P) - E h(Z',P')| over the admissible
// test class is at most (1/2) sum |sigma_jk - sigma'_jk| + 2 sum |lambda_j - lambda'_j|.
// Throws NonpositiveLambda unless all rates are strictly positive.
double comparison_bound(const std::array<double, 4>& sigma1, const std::vector<double>& lambda1,
                        const std::array<double, 4>& sigma2, const std::vector<double>& lambda2);

// Limit covariance for i.i.d.-degree ensembles: pmf[k] = P(D = k), mu = E D.
std::array<double, 4> asymptotic_sigma(const std::vector<double>& pmf, double mu);

// Smaller eigenvalue of a symmetric 2x2 {a, b; b, c}.
double min_eigenvalue_2x2(double a, double b, double c);

} // namespace cm::theory
