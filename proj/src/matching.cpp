#include "cm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cm {

Matching Matching::from_pairs(i64 N, const std::vector<std::pair<i64, i64>>& pairs) {
    if (N % 2 != 0) throw OddTotal("Matching: N must be even");
    Matching g;
    g.partner.assign(static_cast<std::size_t>(N) + 1, 0);
    for (auto [a, b] : pairs) {
        if (a < 1 || a > N || b < 1 || b > N) throw Error("Matching: half-edge out of range");
        if (a == b) throw Error("Matching: half-edge paired with itself");
        if (g.partner[static_cast<std::size_t>(a)] != 0 || g.partner[static_cast<std::size_t>(b)] != 0)
            throw Error("Matching: half-edge paired twice");
        g.partner[static_cast<std::size_t>(a)] = b;
        g.partner[static_cast<std::size_t>(b)] = a;
    }
    for (i64 a = 1; a <= N; ++a)
        if (g.partner[static_cast<std::size_t>(a)] == 0)
            throw Error("Matching: half-edge " + std::to_string(a) + " unmatched");
    return g;
}

std::string Matching::serialize() const {
    std::ostringstream os;
    os << N() << "\n";
    for (i64 a = 1; a <= N(); ++a)
        if (of(a) > a) os << a << " " << of(a) << "\n";
    return os.str();
}

Matching Matching::parse(const std::string& text) {
    std::istringstream is(text);
    i64 N = -1;
    if (!(is >> N)) throw ParseError("Matching::parse: missing N");
    if (N < 0 || N % 2 != 0) throw ParseError("Matching::parse: bad N");
    std::vector<std::pair<i64, i64>> pairs;
    i64 s = 0, t = 0;
    while (is >> s >> t) pairs.emplace_back(s, t);
    if (static_cast<i64>(pairs.size()) != N / 2)
        throw ParseError("Matching::parse: expected " + std::to_string(N / 2) + " pairs");
    try {
        return from_pairs(N, pairs);
    } catch (const Error& e) {
        throw ParseError(std::string("Matching::parse: ") + e.what());
    }
}

Matching sample_uniform(const DegreeSequence& ds, Rng& rng) {
    const i64 N = ds.N;
    if (N == 0) throw EmptyModel("sample_uniform: degree sequence has no half-edges");
    Matching g;
    g.partner.assign(static_cast<std::size_t>(N) + 1, 0);
    std::vector<i64> free(static_cast<std::size_t>(N));
    std::iota(free.begin(), free.end(), i64{1});
    while (!free.empty()) {
        const i64 s = free.front();
        const int idx = uniform_int(rng, 1, static_cast<int>(free.size()) - 1);
        const i64 t = free[static_cast<std::size_t>(idx)];
        g.partner[static_cast<std::size_t>(s)] = t;
        g.partner[static_cast<std::size_t>(t)] = s;
        free.erase(free.begin() + idx);
        free.erase(free.begin());
    }
    return g;
}

bool contains(const Matching& g, const Motif& alpha) {
    for (int e = 0; e < alpha.num_edges; ++e) {
        const auto& pr = alpha.edge[static_cast<std::size_t>(e)];
        if (!g.contains_pair(pr.first, pr.second)) return false;
    }
    return true;
}

MotifStatistics census(const Matching& g, const DegreeSequence& ds) {
    MotifStatistics st;
    const i64 N = ds.N;

    // Self-loops and the multigraph edge list (vertex pairs i<j).
    std::vector<std::pair<int, int>> vpairs;
    vpairs.reserve(static_cast<std::size_t>(N / 2));
    for (i64 a = 1; a <= N; ++a) {
        const i64 b = g.of(a);
        if (b < a) continue;
        int i = ds.owner(a), j = ds.owner(b);
        if (i == j) {
            ++st.s_loops;
        } else {
            if (i > j) std::swap(i, j);
            vpairs.emplace_back(i, j);
        }
    }

    // Multiplicities: m_doubles = sum C(mult, 2); isolated edges are runs of
    // multiplicity 1 between two degree-1 vertices.
    std::sort(vpairs.begin(), vpairs.end());
    for (std::size_t k = 0; k < vpairs.size();) {
        std::size_t r = k;
        while (r < vpairs.size() && vpairs[r] == vpairs[k]) ++r;
        const i64 mult = static_cast<i64>(r - k);
        st.m_doubles += mult * (mult - 1) / 2;
        if (mult == 1 && ds.degree(vpairs[k].first) == 1 && ds.degree(vpairs[k].second) == 1)
            ++st.z_edge;
        k = r;
    }

    // Two-stars: degree-2 center whose both partners sit at degree-1 vertices.
    // (A self-loop at the center is excluded automatically: the partner's owner
    // would be the center itself, degree 2.)
    for (int v = 1; v <= ds.n(); ++v) {
        if (ds.degree(v) != 2) continue;
        const i64 a = ds.first_half_edge(v);
        if (ds.degree(ds.owner(g.of(a))) == 1 && ds.degree(ds.owner(g.of(a + 1))) == 1)
            ++st.z_twostar;
    }

    st.simple = (st.s_loops + st.m_doubles == 0);
    return st;
}

std::pair<double, double> normalize(const MotifStatistics& stats, const DegreeSequence& ds) {
    const int n = ds.n();
    if (n == 0) throw EmptyModel("normalize: empty degree sequence");
    const auto counts = class_counts(ds);
    double mean_edge = 0.0, mean_twostar = 0.0;
    if (counts[0] > 0)
        mean_edge = static_cast<double>(counts[0]) *
                    success_probability(ds, MotifClass::IsolatedEdge);
    if (counts[1] > 0)
        mean_twostar = static_cast<double>(counts[1]) *
                       success_probability(ds, MotifClass::IsolatedTwoStar);
    const double root_n = std::sqrt(static_cast<double>(n));
    return {(static_cast<double>(stats.z_edge) - mean_edge) / root_n,
            (static_cast<double>(stats.z_twostar) - mean_twostar) / root_n};
}

Matching sample_simple(const DegreeSequence& ds, Rng& rng, std::uint64_t max_attempts,
                       std::uint64_t* attempts_out) {
    for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
        Matching g = sample_uniform(ds, rng);
        if (census(g, ds).simple) {
            if (attempts_out) *attempts_out = attempt;
            return g;
        }
    }
    throw AttemptsExhausted("sample_simple: no simple outcome in " +
                            std::to_string(max_attempts) + " attempts",
                            max_attempts);
}

namespace {
void enumerate_rec(Matching& g, i64 N, const std::function<void(const Matching&)>& visit) {
    i64 s = 0;
    for (i64 a = 1; a <= N; ++a)
        if (g.partner[static_cast<std::size_t>(a)] == 0) { s = a; break; }
    if (s == 0) {
        visit(g);
        return;
    }
    for (i64 t = s + 1; t <= N; ++t) {
        if (g.partner[static_cast<std::size_t>(t)] != 0) continue;
        g.partner[static_cast<std::size_t>(s)] = t;
        g.partner[static_cast<std::size_t>(t)] = s;
        enumerate_rec(g, N, visit);
        g.partner[static_cast<std::size_t>(s)] = 0;
        g.partner[static_cast<std::size_t>(t)] = 0;
    }
}
} // namespace

void for_each_matching(i64 N, const std::function<void(const Matching&)>& visit) {
    if (N % 2 != 0) throw OddTotal("for_each_matching: N must be even");
    if (N > 16) throw TooLarge("for_each_matching: N = " + std::to_string(N) + " exceeds cap 16");
    Matching g;
    g.partner.assign(static_cast<std::size_t>(N) + 1, 0);
    enumerate_rec(g, N, visit);
}

i64 count_matchings(i64 N) {
    if (N % 2 != 0) throw OddTotal("count_matchings: N must be even");
    return N == 0 ? 1 : double_falling(N - 1, static_cast<int>(N / 2));
}

} // namespace cm
