#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cm/combinatorics.hpp"
#include "cm/matching.hpp"
#include "cm/stein.hpp"
#include "cm/theory.hpp"

#include "nlohmann/json.hpp"

namespace cm::experiment {

// Monte Carlo experiment configuration, parsed from flat `key=value` text.
//
// Degree-sequence sources:
//   source=regular   n=<vertices> d=<degree>
//   source=profile   counts=<deg>:<count>,<deg>:<count>,...
//   source=file      path=<degree file, one integer per token>
//   source=pmf       n=<vertices> pmf=<p0>,<p1>,...   (largest-remainder counts)
//
// Remaining keys (all optional): reps, seed, threads, dict_size,
// mode=unconditional|conditional|both, max_attempts, out=<json path>,
// csv=<census path>.
struct ExperimentConfig {
    std::string source = "profile";
    long long n = 0;
    int d = 0;
    std::vector<std::pair<int, long long>> counts;
    std::string path;
    std::vector<double> pmf;
    std::uint64_t reps = 100000;
    std::uint64_t seed = 12345;
    int threads = 1;
    int dict_size = 12;
    std::string mode = "unconditional";
    std::uint64_t max_attempts = 1000000;
    std::string out;
    std::string csv;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

// Materializes the configured degree sequence.
DegreeSequence build_degrees(const ExperimentConfig& cfg);

// One dictionary member's measured-vs-reference row.
struct MemberOutcome {
    std::string id;
    double empirical = 0.0;
    double reference = 0.0;
    double abs_diff = 0.0;
    double mc_se = 0.0;
    std::optional<double> bound;  // absent when the bound's precondition fails
    bool pass = false;            // abs_diff <= bound + 3 * mc_se (vacuous if no bound)
};

// One side (unconditional or conditional-on-simple) of the comparison.
struct SideReport {
    bool skipped = false;
    std::string reason;  // why skipped
    std::optional<double> bound;
    std::vector<MemberOutcome> members;
    double max_abs_diff = 0.0;
    std::uint64_t samples = 0;  // reps used (accepted count for the conditional side)
    bool pass = true;
};

struct DiscrepancyReport {
    long long n = 0;
    long long N = 0;
    theory::TheoryReport theory;
    MemberOutcome simplicity;  // empirical P(simple) vs the Poisson limit, bound_b
    SideReport unconditional;
    SideReport conditional;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    bool pass = true;  // all non-skipped sides pass
};

// Runs the full sampling experiment described by `cfg`. Deterministic for a
// fixed seed: replicate k always uses its own RNG substream, and partial sums
// are reduced in fixed chunk order regardless of thread count. Writes the
// per-replicate census CSV to cfg.csv when set (forces a sequential pass).
DiscrepancyReport run_experiment(const ExperimentConfig& cfg);

nlohmann::ordered_json discrepancy_json(const ExperimentConfig& cfg,
                                        const DiscrepancyReport& rep);

// Census CSV header used by both the experiment runner and the sampling CLI.
std::string census_csv_header();
std::string census_csv_row(std::uint64_t rep, const MotifStatistics& stats, double w_edge,
                           double w_twostar);

} // namespace cm::experiment
