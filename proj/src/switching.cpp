#include "cm/switching.hpp"

#include <algorithm>
#include <sstream>

namespace cm {

i64 switch_range(i64 N, int num_edges, int l) {
    return N - 2 * static_cast<i64>(num_edges - l) - 1;
}

std::vector<i64> switch_exclusions(const Motif& alpha, int l) {
    std::vector<i64> excl;
    excl.push_back(alpha.edge[static_cast<std::size_t>(l - 1)].first);  // s_min of pair l
    for (int m = l + 1; m <= alpha.num_edges; ++m) {
        excl.push_back(alpha.edge[static_cast<std::size_t>(m - 1)].first);
        excl.push_back(alpha.edge[static_cast<std::size_t>(m - 1)].second);
    }
    std::sort(excl.begin(), excl.end());
    return excl;
}

namespace {

// b-th smallest element of [1,N] minus the sorted exclusion list.
i64 kth_eligible(i64 N, const std::vector<i64>& excl, i64 b) {
    i64 t = b;
    for (i64 x : excl)
        if (x <= t) ++t;
    if (t > N) throw PreconditionViolated("switching: eligible index beyond N");
    return t;
}

// Rank of eligible element t within [1,N] minus exclusions.
i64 rank_of_eligible(const std::vector<i64>& excl, i64 t) {
    i64 below = 0;
    for (i64 x : excl) {
        if (x == t) throw PreconditionViolated("switching: ranking an excluded half-edge");
        if (x < t) ++below;
    }
    return t - below;
}

void require_pairs_from(const Matching& g, const Motif& alpha, int first_pair) {
    for (int m = first_pair; m <= alpha.num_edges; ++m) {
        const auto& pr = alpha.edge[static_cast<std::size_t>(m - 1)];
        if (!g.contains_pair(pr.first, pr.second))
            throw PreconditionViolated("switching: matching lacks motif pair " +
                                       std::to_string(m));
    }
}

} // namespace

Matching switch_step(const Matching& g, const Motif& alpha, int l, int b) {
    if (l < 1 || l > alpha.num_edges) throw PreconditionViolated("switch_step: bad stage");
    const i64 N = g.N();
    const i64 range = switch_range(N, alpha.num_edges, l);
    if (b < 1 || static_cast<i64>(b) > range)
        throw PreconditionViolated("switch_step: index " + std::to_string(b) +
                                   " outside [1," + std::to_string(range) + "]");
    require_pairs_from(g, alpha, l);

    const i64 s_min = alpha.edge[static_cast<std::size_t>(l - 1)].first;
    const i64 s_max = alpha.edge[static_cast<std::size_t>(l - 1)].second;
    const auto excl = switch_exclusions(alpha, l);
    const i64 t1 = kth_eligible(N, excl, b);
    if (t1 == s_max) return g;  // identity choice

    Matching out = g;
    const i64 t2 = g.of(t1);
    out.partner[static_cast<std::size_t>(s_min)] = t1;
    out.partner[static_cast<std::size_t>(t1)] = s_min;
    out.partner[static_cast<std::size_t>(s_max)] = t2;
    out.partner[static_cast<std::size_t>(t2)] = s_max;
    return out;
}

Matching apply_switch(const Matching& g, const Motif& alpha, const SwitchIndices& idx) {
    if (static_cast<int>(idx.b.size()) != alpha.num_edges)
        throw PreconditionViolated("apply_switch: need one index per motif pair");
    Matching cur = g;
    for (int l = 1; l <= alpha.num_edges; ++l)
        cur = switch_step(cur, alpha, l, idx.b[static_cast<std::size_t>(l - 1)]);
    return cur;
}

std::pair<Matching, SwitchIndices> unswitch(const Matching& g_out, const Motif& alpha) {
    Matching cur = g_out;
    SwitchIndices idx;
    idx.b.assign(static_cast<std::size_t>(alpha.num_edges), 0);
    for (int l = alpha.num_edges; l >= 1; --l) {
        const i64 s_min = alpha.edge[static_cast<std::size_t>(l - 1)].first;
        const i64 s_max = alpha.edge[static_cast<std::size_t>(l - 1)].second;
        // Pairs > l were restored by later iterations (or hold by assumption),
        // so partner(s_min) is never excluded at stage l.
        const i64 t1 = cur.of(s_min);
        const i64 t2 = cur.of(s_max);
        const auto excl = switch_exclusions(alpha, l);
        idx.b[static_cast<std::size_t>(l - 1)] = static_cast<int>(rank_of_eligible(excl, t1));
        cur.partner[static_cast<std::size_t>(s_min)] = s_max;
        cur.partner[static_cast<std::size_t>(s_max)] = s_min;
        cur.partner[static_cast<std::size_t>(t1)] = t2;
        cur.partner[static_cast<std::size_t>(t2)] = t1;
    }
    return {cur, idx};
}

CouplingSample couple(const Matching& g, const Motif& alpha, Rng& rng) {
    CouplingSample s;
    s.base = g;
    s.alpha = alpha;
    if (!contains(g, alpha)) {
        s.coupled = g;
        return s;
    }
    SwitchIndices idx;
    idx.b.reserve(static_cast<std::size_t>(alpha.num_edges));
    for (int l = 1; l <= alpha.num_edges; ++l) {
        const i64 range = switch_range(g.N(), alpha.num_edges, l);
        idx.b.push_back(uniform_int(rng, 1, static_cast<int>(range)));
    }
    s.coupled = apply_switch(g, alpha, idx);
    s.indices = std::move(idx);
    return s;
}

std::vector<IndicatorPair> coupled_indicators(const CouplingSample& s,
                                              const std::vector<Motif>& betas) {
    std::vector<IndicatorPair> out;
    out.reserve(betas.size());
    for (const auto& beta : betas)
        out.push_back({contains(s.base, beta), contains(s.coupled, beta)});
    return out;
}

std::string coupling_trace_header() { return "alpha,b_indices,removed_pairs,added_pairs"; }

std::string coupling_trace_row(const CouplingSample& s) {
    std::ostringstream os;
    os << s.alpha.str() << ",";
    if (s.indices) {
        for (std::size_t i = 0; i < s.indices->b.size(); ++i)
            os << (i ? "|" : "") << s.indices->b[i];
    } else {
        os << "absent";
    }
    std::ostringstream removed, added;
    for (i64 a = 1; a <= s.base.N(); ++a) {
        const i64 b = s.base.of(a);
        if (b > a && s.coupled.of(a) != b) removed << "(" << a << "-" << b << ")";
    }
    for (i64 a = 1; a <= s.coupled.N(); ++a) {
        const i64 b = s.coupled.of(a);
        if (b > a && s.base.of(a) != b) added << "(" << a << "-" << b << ")";
    }
    os << "," << removed.str() << "," << added.str();
    return os.str();
}

} // namespace cm
