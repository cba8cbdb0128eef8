// Perfect matchings of half-edges: uniform sampling, motif census,
// normalization, rejection sampling of simple outcomes, and exhaustive
// enumeration for small N.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cm/combinatorics.hpp"
#include "cm/rng.hpp"

namespace cm {

// A perfect matching of half-edges 1..N: a fixed-point-free involution.
struct Matching {
    std::vector<i64> partner;  // size N+1, 1-based; partner[0] unused

    i64 N() const { return static_cast<i64>(partner.size()) - 1; }
    i64 of(i64 a) const { return partner[static_cast<std::size_t>(a)]; }
    bool contains_pair(i64 a, i64 b) const { return of(a) == b; }

    static Matching from_pairs(i64 N, const std::vector<std::pair<i64, i64>>& pairs);

    // "N" then one "s t" line per matched pair with s < t, ascending in s.
    std::string serialize() const;
    static Matching parse(const std::string& text);

    bool operator==(const Matching&) const = default;
};

struct MotifStatistics {
    i64 z_edge = 0;     // isolated edges present
    i64 z_twostar = 0;  // isolated two-stars present
    i64 s_loops = 0;    // self-loops (matched pairs within one vertex)
    i64 m_doubles = 0;  // sum over vertex pairs of C(multiplicity, 2)
    bool simple = true; // s_loops + m_doubles == 0

    bool operator==(const MotifStatistics&) const = default;
};

// Uniform matching: repeatedly pair the lowest unmatched half-edge with a
// uniformly chosen other unmatched half-edge.  Throws EmptyModel when N == 0.
Matching sample_uniform(const DegreeSequence& ds, Rng& rng);

// Does the matching contain every pair of the motif?
bool contains(const Matching& g, const Motif& alpha);

// Count all four statistics in one pass (near-linear in N).
MotifStatistics census(const Matching& g, const DegreeSequence& ds);

// Centered/scaled values ((z_edge - E z_edge)/sqrt(n), (z_twostar - E z_twostar)/sqrt(n))
// using the unconditional expectations, even for conditioned samples.
std::pair<double, double> normalize(const MotifStatistics& stats, const DegreeSequence& ds);

// Rejection-sample a matching whose multigraph is simple.  Throws
// AttemptsExhausted (with the attempt count) when the cap is hit.  When
// attempts_out is non-null it receives the number of attempts used.
Matching sample_simple(const DegreeSequence& ds, Rng& rng,
                       std::uint64_t max_attempts = 1000000,
                       std::uint64_t* attempts_out = nullptr);

// Visit every perfect matching of 1..N exactly once ((N-1)!! of them).
// Throws OddTotal for odd N, TooLarge for N > 16.  N = 0 visits the empty matching.
void for_each_matching(i64 N, const std::function<void(const Matching&)>& visit);

// (N-1)!!
i64 count_matchings(i64 N);

} // namespace cm
