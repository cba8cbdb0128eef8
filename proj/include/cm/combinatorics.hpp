// Degree sequences, falling factorials, motif classes and their index sets.
//
// A degree sequence d_1..d_n defines N = sum d_i half-edges, labelled 1..N in
// contiguous ascending blocks per vertex.  A motif is a small set of matched
// pairs of half-edges whose presence in a uniform pairing we track:
//   isolated edge      e=1, v=2   both endpoints degree-1
//   isolated two-star  e=2, v=3   degree-2 center, two degree-1 leaves
//   self-loop          e=1, v=1   both half-edges at one vertex
//   double edge        e=2, v=2   two parallel pairs between two vertices
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cm/common.hpp"

namespace cm {

using i64 = std::int64_t;

// (m)_r = m(m-1)...(m-r+1).  Conventions: (m)_0 = 1; the product is zero as
// soon as a factor hits zero, and we define (m)_r = 0 whenever r > m (so any
// m <= 0 with r >= 1 gives 0, never a signed product).
i64 falling(i64 m, int r);

// ((m))_r = m(m-2)(m-4)...(m-2(r-1)), the double falling factorial.  Same
// conventions: ((m))_0 = 1, and the value is 0 when m - 2(r-1) <= 0.
i64 double_falling(i64 m, int r);

enum class MotifClass : int {
    IsolatedEdge = 0,
    IsolatedTwoStar = 1,
    SelfLoop = 2,
    DoubleEdge = 3,
};

inline constexpr std::array<MotifClass, 4> kMotifClasses = {
    MotifClass::IsolatedEdge, MotifClass::IsolatedTwoStar,
    MotifClass::SelfLoop, MotifClass::DoubleEdge};

// Number of matched pairs e(H) a motif of this class occupies.
int edges_of(MotifClass cls);
// Number of vertices v(H) a motif of this class touches.
int vertices_of(MotifClass cls);
const char* name_of(MotifClass cls);

struct DegreeSequence {
    std::vector<int> degrees;    // d_1..d_n, vertex ids are 1..n
    i64 N = 0;                   // total half-edges
    std::vector<int> vertex_of;  // size N+1, 1-based: owner vertex of each half-edge
    std::vector<i64> block_start;  // size n+2, 1-based: first half-edge of each vertex
    std::vector<i64> degree_counts;  // degree_counts[k] = #{i : d_i = k}

    int n() const { return static_cast<int>(degrees.size()); }
    i64 nk(int k) const {
        if (k < 0 || k >= static_cast<i64>(degree_counts.size())) return 0;
        return degree_counts[k];
    }
    int degree(int vertex) const { return degrees[static_cast<std::size_t>(vertex - 1)]; }
    // First half-edge of a vertex; half-edges of vertex v are
    // block_start[v] .. block_start[v] + degree(v) - 1.
    i64 first_half_edge(int vertex) const { return block_start[static_cast<std::size_t>(vertex)]; }
    int owner(i64 half_edge) const { return vertex_of[static_cast<std::size_t>(half_edge)]; }

    // Build from per-vertex degrees; throws OddTotal when sum is odd.
    static DegreeSequence build(std::vector<int> degrees);
};

// One motif instance in canonical form: each matched pair stored (min,max),
// pairs sorted ascending by first element.
struct Motif {
    MotifClass cls{};
    int num_edges = 0;
    std::array<std::pair<i64, i64>, 2> edge{};  // edge[1] meaningful iff num_edges == 2

    // Canonicalize pair order; asserts half-edges are distinct.
    static Motif make(MotifClass cls, std::pair<i64, i64> e0);
    static Motif make(MotifClass cls, std::pair<i64, i64> e0, std::pair<i64, i64> e1);

    // All half-edges of the motif, ascending.
    std::vector<i64> half_edges() const;
    // Distinct vertices touched, ascending.
    std::vector<int> vertices(const DegreeSequence& ds) const;

    bool operator==(const Motif& other) const {
        return cls == other.cls && num_edges == other.num_edges && edge == other.edge;
    }
    bool operator<(const Motif& other) const {
        if (cls != other.cls) return cls < other.cls;
        if (num_edges != other.num_edges) return num_edges < other.num_edges;
        return edge < other.edge;
    }
    std::string str() const;
};

// How two motifs overlap.  shares_common_edge implies shares_half_edge
// implies shares_vertex.
struct MotifRelation {
    bool shares_vertex = false;
    bool shares_half_edge = false;
    bool shares_common_edge = false;  // an identical matched pair in both
    bool equal = false;
};
MotifRelation relation(const Motif& a, const Motif& b, const DegreeSequence& ds);

// All motifs of one class, in a deterministic canonical order.
std::vector<Motif> enumerate_motifs(const DegreeSequence& ds, MotifClass cls);

// Closed-form sizes of the four index sets, ordered as kMotifClasses:
//   (n1)_2/2,  (n1)_2 n2,  sum_i (d_i)_2 / 2,  sum_{i<j} (d_i)_2 (d_j)_2 / 2.
std::array<i64, 4> class_counts(const DegreeSequence& ds);

// Probability that one fixed motif of this class is present in a uniform
// pairing: 1/((N-1))_e.  Throws DegenerateN when ((N-1))_e <= 0.
double success_probability(const DegreeSequence& ds, MotifClass cls);
// The integer denominator ((N-1))_e, for exact-arithmetic callers.
i64 success_denominator(const DegreeSequence& ds, MotifClass cls);

// Parse a whitespace-separated list of non-negative integer degrees;
// '#' starts a comment that runs to end of line.  Throws ParseError.
std::vector<int> parse_degrees(const std::string& text);
std::vector<int> load_degrees(const std::string& path);

} // namespace cm
