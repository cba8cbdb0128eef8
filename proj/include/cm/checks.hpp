#pragma once

#include <string>
#include <vector>

namespace cm::checks {

// One verification outcome.  `skipped` marks a check whose preconditions
// ruled it out (reported, but not a failure by itself); failures carry a
// human-readable reason in `detail`.
struct Result {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0.0;
};

// The thirteen acceptance checks, in suite order.
Result criterion1();   // index-set cardinalities vs closed forms
Result criterion2();   // conditioned-on-simple law is uniform over simple graphs
Result criterion3();   // switched-copy law given presence is uniform
Result criterion4();   // closed-form covariance vs exhaustive oracle
Result criterion5();   // pair-moment closed forms (disjoint destruction, common edge)
Result criterion6();   // coupling symmetry: E[I_a(I_b - J_b|a)] = Cov(I_a, I_b)
Result criterion7();   // Poisson total-variation unimodality identity
Result criterion8();   // generator applied to the solved test function
Result criterion9();   // solution smoothness one-sided bounds
Result criterion10();  // simplicity-probability bound, Monte Carlo
Result criterion11();  // dictionary discrepancy bounds, Monte Carlo
Result criterion12();  // bound decay trend on regular sequences
Result criterion13();  // byte-identical reports for a fixed seed

std::vector<Result> run_all();

// Focused suites for the CLI: exact coupling checks, closed-form checks, and
// the numerical machinery (full = acceptance-sized, else a quick smoke pass).
std::vector<Result> verify_coupling();
std::vector<Result> verify_formulas();
std::vector<Result> verify_stein(bool full);

std::string format_results(const std::vector<Result>& results);  // one line each
bool all_pass(const std::vector<Result>& results);

} // namespace cm::checks
