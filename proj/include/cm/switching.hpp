// Stage-wise switching that plants a motif into a matching, its exact inverse,
// and the coupling built from it.
//
// The motif's pairs are processed in canonical order.  Stage l handles pair
// {s_min, s_max}: among the half-edges that are neither s_min nor part of a
// later motif pair (an eligible set of size N - 2(e-l) - 1), the b-th smallest
// t1 is chosen, its partner t2 located, and pairs {s_min,s_max},{t1,t2} are
// replaced by {s_min,t1},{s_max,t2}.  Choosing t1 = s_max leaves the matching
// unchanged.  Each stage is a bijection between (matchings containing motif
// pairs >= l) x (index range) and (matchings containing motif pairs >= l+1).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cm/matching.hpp"
#include "cm/rng.hpp"

namespace cm {

// Per-stage switching indices; b[l-1] lies in [1, N - 2(e-l) - 1].
struct SwitchIndices {
    std::vector<int> b;
};

// Size of the stage-l index range (l is 1-based).
i64 switch_range(i64 N, int num_edges, int l);

// Sorted half-edges excluded from the stage-l eligible set:
// s_min of pair l plus all half-edges of pairs > l.
std::vector<i64> switch_exclusions(const Motif& alpha, int l);

// Apply stage l to a matching that contains motif pairs l..e (throws
// PreconditionViolated otherwise, or when b is out of range).
Matching switch_step(const Matching& g, const Motif& alpha, int l, int b);

// Full switching: stages 1..e in order.  Precondition: g contains all of alpha.
Matching apply_switch(const Matching& g, const Motif& alpha, const SwitchIndices& b);

// Exact inverse, total on all matchings: recover the unique preimage matching
// (which contains all of alpha) and the stage indices.  A matching already
// containing alpha maps to itself with the identity ranks.
std::pair<Matching, SwitchIndices> unswitch(const Matching& g_out, const Motif& alpha);

// One coupled draw.  When the motif is absent the coupled copy equals the base
// and no indices are drawn (the switched value would never be inspected, so
// sampling indices lazily leaves the law unchanged).
struct CouplingSample {
    Matching base;
    Matching coupled;
    Motif alpha;
    std::optional<SwitchIndices> indices;  // engaged iff alpha was present in base
};

CouplingSample couple(const Matching& g, const Motif& alpha, Rng& rng);

// For each beta: (present in base, present in coupled copy).
struct IndicatorPair {
    bool base = false;     // I_beta
    bool coupled = false;  // J_beta_alpha
};
std::vector<IndicatorPair> coupled_indicators(const CouplingSample& s,
                                              const std::vector<Motif>& betas);

// CSV trace: header and one row per coupling sample
// (alpha, stage indices, removed pairs, added pairs).
std::string coupling_trace_header();
std::string coupling_trace_row(const CouplingSample& s);

} // namespace cm
