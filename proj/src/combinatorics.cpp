#include "cm/combinatorics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

namespace cm {

i64 falling(i64 m, int r) {
    if (r < 0) throw Error("falling: negative order");
    if (r == 0) return 1;
    if (m < r) return 0;  // covers m <= 0 as well: some factor m-k vanishes first
    i64 out = 1;
    for (int k = 0; k < r; ++k) out *= (m - k);
    return out;
}

i64 double_falling(i64 m, int r) {
    if (r < 0) throw Error("double_falling: negative order");
    if (r == 0) return 1;
    if (m - 2 * static_cast<i64>(r - 1) <= 0) return 0;  // last factor non-positive
    i64 out = 1;
    for (int k = 0; k < r; ++k) out *= (m - 2 * static_cast<i64>(k));
    return out;
}

int edges_of(MotifClass cls) {
    switch (cls) {
        case MotifClass::IsolatedEdge: return 1;
        case MotifClass::IsolatedTwoStar: return 2;
        case MotifClass::SelfLoop: return 1;
        case MotifClass::DoubleEdge: return 2;
    }
    throw Error("edges_of: bad class");
}

int vertices_of(MotifClass cls) {
    switch (cls) {
        case MotifClass::IsolatedEdge: return 2;
        case MotifClass::IsolatedTwoStar: return 3;
        case MotifClass::SelfLoop: return 1;
        case MotifClass::DoubleEdge: return 2;
    }
    throw Error("vertices_of: bad class");
}

const char* name_of(MotifClass cls) {
    switch (cls) {
        case MotifClass::IsolatedEdge: return "isolated_edge";
        case MotifClass::IsolatedTwoStar: return "isolated_two_star";
        case MotifClass::SelfLoop: return "self_loop";
        case MotifClass::DoubleEdge: return "double_edge";
    }
    throw Error("name_of: bad class");
}

DegreeSequence DegreeSequence::build(std::vector<int> degrees) {
    for (int d : degrees)
        if (d < 0) throw Error("DegreeSequence: negative degree");
    i64 total = std::accumulate(degrees.begin(), degrees.end(), i64{0});
    if (total % 2 != 0)
        throw OddTotal("degree sum " + std::to_string(total) + " is odd; no pairing exists");

    DegreeSequence ds;
    ds.degrees = std::move(degrees);
    ds.N = total;
    const int n = ds.n();
    ds.vertex_of.assign(static_cast<std::size_t>(total) + 1, 0);
    ds.block_start.assign(static_cast<std::size_t>(n) + 2, 0);
    int max_deg = 0;
    i64 next = 1;
    for (int v = 1; v <= n; ++v) {
        ds.block_start[static_cast<std::size_t>(v)] = next;
        const int d = ds.degrees[static_cast<std::size_t>(v - 1)];
        max_deg = std::max(max_deg, d);
        for (int k = 0; k < d; ++k) ds.vertex_of[static_cast<std::size_t>(next++)] = v;
    }
    ds.block_start[static_cast<std::size_t>(n) + 1] = next;
    ds.degree_counts.assign(static_cast<std::size_t>(max_deg) + 1, 0);
    for (int d : ds.degrees) ++ds.degree_counts[static_cast<std::size_t>(d)];
    return ds;
}

namespace {
std::pair<i64, i64> norm_pair(std::pair<i64, i64> e) {
    if (e.first > e.second) std::swap(e.first, e.second);
    return e;
}
} // namespace

Motif Motif::make(MotifClass cls, std::pair<i64, i64> e0) {
    if (edges_of(cls) != 1) throw Error("Motif::make: class needs two pairs");
    e0 = norm_pair(e0);
    if (e0.first == e0.second) throw Error("Motif::make: repeated half-edge");
    Motif m;
    m.cls = cls;
    m.num_edges = 1;
    m.edge[0] = e0;
    return m;
}

Motif Motif::make(MotifClass cls, std::pair<i64, i64> e0, std::pair<i64, i64> e1) {
    if (edges_of(cls) != 2) throw Error("Motif::make: class needs one pair");
    e0 = norm_pair(e0);
    e1 = norm_pair(e1);
    if (e1 < e0) std::swap(e0, e1);
    Motif m;
    m.cls = cls;
    m.num_edges = 2;
    m.edge[0] = e0;
    m.edge[1] = e1;
    auto h = m.half_edges();
    for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] == h[i - 1]) throw Error("Motif::make: repeated half-edge");
    return m;
}

std::vector<i64> Motif::half_edges() const {
    std::vector<i64> out;
    out.reserve(static_cast<std::size_t>(2 * num_edges));
    for (int e = 0; e < num_edges; ++e) {
        out.push_back(edge[static_cast<std::size_t>(e)].first);
        out.push_back(edge[static_cast<std::size_t>(e)].second);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Motif::vertices(const DegreeSequence& ds) const {
    std::vector<int> out;
    for (i64 h : half_edges()) out.push_back(ds.owner(h));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Motif::str() const {
    std::ostringstream os;
    os << name_of(cls);
    for (int e = 0; e < num_edges; ++e)
        os << (e == 0 ? ":" : "") << "(" << edge[static_cast<std::size_t>(e)].first << "-"
           << edge[static_cast<std::size_t>(e)].second << ")";
    return os.str();
}

MotifRelation relation(const Motif& a, const Motif& b, const DegreeSequence& ds) {
    MotifRelation rel;
    rel.equal = (a == b);

    auto ha = a.half_edges();
    auto hb = b.half_edges();
    for (i64 x : ha)
        if (std::find(hb.begin(), hb.end(), x) != hb.end()) { rel.shares_half_edge = true; break; }

    auto va = a.vertices(ds);
    auto vb = b.vertices(ds);
    for (int x : va)
        if (std::find(vb.begin(), vb.end(), x) != vb.end()) { rel.shares_vertex = true; break; }

    for (int i = 0; i < a.num_edges && !rel.shares_common_edge; ++i)
        for (int j = 0; j < b.num_edges; ++j)
            if (a.edge[static_cast<std::size_t>(i)] == b.edge[static_cast<std::size_t>(j)]) {
                rel.shares_common_edge = true;
                break;
            }
    return rel;
}

std::vector<Motif> enumerate_motifs(const DegreeSequence& ds, MotifClass cls) {
    std::vector<Motif> out;
    const int n = ds.n();

    // Half-edges of degree-1 vertices, ascending.
    std::vector<i64> leaves;
    for (int v = 1; v <= n; ++v)
        if (ds.degree(v) == 1) leaves.push_back(ds.first_half_edge(v));

    switch (cls) {
        case MotifClass::IsolatedEdge: {
            for (std::size_t i = 0; i < leaves.size(); ++i)
                for (std::size_t j = i + 1; j < leaves.size(); ++j)
                    out.push_back(Motif::make(cls, {leaves[i], leaves[j]}));
            break;
        }
        case MotifClass::IsolatedTwoStar: {
            // Center c of degree 2 with half-edges (a,a+1); ordered pair of
            // distinct leaves (u,w): pairs {a,u} and {a+1,w}.  The two
            // orderings of (u,w) are distinct motifs.
            for (int c = 1; c <= n; ++c) {
                if (ds.degree(c) != 2) continue;
                const i64 a = ds.first_half_edge(c);
                for (std::size_t i = 0; i < leaves.size(); ++i)
                    for (std::size_t j = 0; j < leaves.size(); ++j) {
                        if (i == j) continue;
                        out.push_back(Motif::make(cls, {a, leaves[i]}, {a + 1, leaves[j]}));
                    }
            }
            break;
        }
        case MotifClass::SelfLoop: {
            for (int v = 1; v <= n; ++v) {
                const int d = ds.degree(v);
                const i64 a = ds.first_half_edge(v);
                for (int s = 0; s < d; ++s)
                    for (int t = s + 1; t < d; ++t)
                        out.push_back(Motif::make(cls, {a + s, a + t}));
            }
            break;
        }
        case MotifClass::DoubleEdge: {
            // Unordered pair of vertices i<j, an unordered pair {s1<s2} at i,
            // an ordered pair (t1,t2) of distinct half-edges at j: pairs
            // {s1,t1},{s2,t2}.  The two orderings of (t1,t2) are distinct motifs.
            for (int i = 1; i <= n; ++i) {
                if (ds.degree(i) < 2) continue;
                const i64 ai = ds.first_half_edge(i);
                const int di = ds.degree(i);
                for (int j = i + 1; j <= n; ++j) {
                    if (ds.degree(j) < 2) continue;
                    const i64 aj = ds.first_half_edge(j);
                    const int dj = ds.degree(j);
                    for (int s1 = 0; s1 < di; ++s1)
                        for (int s2 = s1 + 1; s2 < di; ++s2)
                            for (int t1 = 0; t1 < dj; ++t1)
                                for (int t2 = 0; t2 < dj; ++t2) {
                                    if (t1 == t2) continue;
                                    out.push_back(Motif::make(cls, {ai + s1, aj + t1},
                                                              {ai + s2, aj + t2}));
                                }
                }
            }
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::array<i64, 4> class_counts(const DegreeSequence& ds) {
    const i64 n1 = ds.nk(1);
    const i64 n2 = ds.nk(2);
    i64 sum_d2 = 0;   // sum of (d_i)_2
    i64 sum_d2sq = 0; // sum of (d_i)_2 squared
    for (int d : ds.degrees) {
        const i64 v = falling(d, 2);
        sum_d2 += v;
        sum_d2sq += v * v;
    }
    std::array<i64, 4> out{};
    out[0] = falling(n1, 2) / 2;
    out[1] = falling(n1, 2) * n2;
    out[2] = sum_d2 / 2;
    out[3] = (sum_d2 * sum_d2 - sum_d2sq) / 4;  // sum_{i<j} (d_i)_2 (d_j)_2 / 2
    return out;
}

i64 success_denominator(const DegreeSequence& ds, MotifClass cls) {
    return double_falling(ds.N - 1, edges_of(cls));
}

double success_probability(const DegreeSequence& ds, MotifClass cls) {
    const i64 den = success_denominator(ds, cls);
    if (den <= 0)
        throw DegenerateN("success_probability: ((N-1))_e non-positive for N=" +
                          std::to_string(ds.N) + ", e=" + std::to_string(edges_of(cls)));
    return 1.0 / static_cast<double>(den);
}

std::vector<int> parse_degrees(const std::string& text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    bool in_comment = false;
    for (char ch : text) {
        if (ch == '#') in_comment = true;
        if (ch == '\n') in_comment = false;
        cleaned.push_back(in_comment ? ' ' : ch);
    }
    std::vector<int> out;
    std::istringstream is(cleaned);
    std::string tok;
    while (is >> tok) {
        for (char ch : tok)
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw ParseError("degree list: bad token '" + tok + "'");
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ParseError("degree list: token out of range '" + tok + "'");
        }
    }
    if (out.empty()) throw ParseError("degree list: no degrees found");
    return out;
}

std::vector<int> load_degrees(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open degree file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_degrees(ss.str());
}

} // namespace cm
