#include "cm/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

namespace cm::oracle {

using json = nlohmann::ordered_json;

std::string rat_str(const Rat& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

double rat_double(const Rat& r) { return r.convert_to<double>(); }

std::vector<Matching> enumerate_matchings(i64 N) {
    std::vector<Matching> out;
    for_each_matching(N, [&](const Matching& g) { out.push_back(g); });
    return out;
}

namespace {

using StatsKey = std::array<i64, 4>;

StatsKey key_of(const MotifStatistics& st) {
    return {st.z_edge, st.z_twostar, st.s_loops, st.m_doubles};
}

MotifStatistics stats_of(const StatsKey& k) {
    MotifStatistics st;
    st.z_edge = k[0];
    st.z_twostar = k[1];
    st.s_loops = k[2];
    st.m_doubles = k[3];
    st.simple = (st.s_loops + st.m_doubles == 0);
    return st;
}

// Run fn over every b-grid cell of the switching for a base matching that
// contains alpha; returns the number of cells.
template <typename F>
i64 for_each_switch(const Matching& g, const Motif& alpha, F&& fn) {
    const i64 N = g.N();
    if (alpha.num_edges == 1) {
        const i64 r1 = switch_range(N, 1, 1);
        for (int b = 1; b <= r1; ++b) {
            SwitchIndices idx{{b}};
            fn(apply_switch(g, alpha, idx));
        }
        return r1;
    }
    const i64 r1 = switch_range(N, 2, 1);
    const i64 r2 = switch_range(N, 2, 2);
    for (int b1 = 1; b1 <= r1; ++b1) {
        const Matching mid = switch_step(g, alpha, 1, b1);
        for (int b2 = 1; b2 <= r2; ++b2) fn(switch_step(mid, alpha, 2, b2));
    }
    return r1 * r2;
}

i64 grid_size(i64 N, const Motif& alpha) {
    i64 cells = 1;
    for (int l = 1; l <= alpha.num_edges; ++l) cells *= switch_range(N, alpha.num_edges, l);
    return cells;
}

} // namespace

ExactLaw exact_law(const DegreeSequence& ds) {
    ExactLaw law;
    std::map<StatsKey, i64> counts;
    i64 M = 0;
    BigInt sum_z1 = 0, sum_z2 = 0, sum_s = 0, sum_m = 0;
    BigInt sum_z1z1 = 0, sum_z1z2 = 0, sum_z2z2 = 0;
    i64 simple_count = 0;
    for_each_matching(ds.N, [&](const Matching& g) {
        const MotifStatistics st = census(g, ds);
        ++counts[key_of(st)];
        ++M;
        sum_z1 += st.z_edge;
        sum_z2 += st.z_twostar;
        sum_s += st.s_loops;
        sum_m += st.m_doubles;
        sum_z1z1 += BigInt(st.z_edge) * st.z_edge;
        sum_z1z2 += BigInt(st.z_edge) * st.z_twostar;
        sum_z2z2 += BigInt(st.z_twostar) * st.z_twostar;
        if (st.simple) ++simple_count;
    });
    law.num_matchings = M;
    for (const auto& [k, c] : counts) law.support.push_back({stats_of(k), Rat(c, M)});
    law.p_simple = Rat(simple_count, M);
    law.mean_z_edge = Rat(sum_z1, M);
    law.mean_z_twostar = Rat(sum_z2, M);
    law.mean_s_loops = Rat(sum_s, M);
    law.mean_m_doubles = Rat(sum_m, M);
    const int n = ds.n();
    // Cov(W_i, W_j) = (E[z_i z_j] - E z_i E z_j) / n; the centering shift drops out.
    law.cov_w11 = (Rat(sum_z1z1, M) - Rat(sum_z1, M) * Rat(sum_z1, M)) / n;
    law.cov_w12 = (Rat(sum_z1z2, M) - Rat(sum_z1, M) * Rat(sum_z2, M)) / n;
    law.cov_w22 = (Rat(sum_z2z2, M) - Rat(sum_z2, M) * Rat(sum_z2, M)) / n;
    if (simple_count > 0)
        for (const auto& [k, c] : counts)
            if (k[2] + k[3] == 0)
                law.conditional_simple.push_back({stats_of(k), Rat(c, simple_count)});
    return law;
}

std::string exact_law_json(const DegreeSequence& ds, const ExactLaw& law) {
    json j;
    j["degrees"] = ds.degrees;
    j["n"] = ds.n();
    j["N"] = ds.N;
    j["num_matchings"] = law.num_matchings.str();
    j["p_simple"] = rat_str(law.p_simple);
    j["mean"] = {{"z_edge", rat_str(law.mean_z_edge)},
                 {"z_twostar", rat_str(law.mean_z_twostar)},
                 {"s_loops", rat_str(law.mean_s_loops)},
                 {"m_doubles", rat_str(law.mean_m_doubles)}};
    j["cov_w"] = {{"w11", rat_str(law.cov_w11)},
                  {"w12", rat_str(law.cov_w12)},
                  {"w22", rat_str(law.cov_w22)}};
    auto support_json = [](const std::vector<SupportPoint>& pts) {
        json arr = json::array();
        for (const auto& p : pts)
            arr.push_back({{"z_edge", p.stats.z_edge},
                           {"z_twostar", p.stats.z_twostar},
                           {"s_loops", p.stats.s_loops},
                           {"m_doubles", p.stats.m_doubles},
                           {"prob", rat_str(p.prob)}});
        return arr;
    };
    j["support"] = support_json(law.support);
    j["conditional_simple"] = support_json(law.conditional_simple);
    return j.dump(2) + "\n";
}

UniformCheck uniform_simple_check(const DegreeSequence& ds) {
    if (ds.N > 12) throw TooLarge("uniform_simple_check: N > 12");
    UniformCheck out;
    // Multiplicity each simple graph must carry: prod_i d_i!.
    BigInt expected = 1;
    for (int d : ds.degrees)
        for (int k = 2; k <= d; ++k) expected *= k;

    std::map<std::vector<std::pair<int, int>>, i64> per_graph;
    i64 M = 0, simple_count = 0;
    for_each_matching(ds.N, [&](const Matching& g) {
        ++M;
        const MotifStatistics st = census(g, ds);
        if (!st.simple) return;
        ++simple_count;
        std::vector<std::pair<int, int>> edges;
        for (i64 a = 1; a <= ds.N; ++a) {
            const i64 b = g.of(a);
            if (b < a) continue;
            int u = ds.owner(a), v = ds.owner(b);
            if (u > v) std::swap(u, v);
            edges.emplace_back(u, v);
        }
        std::sort(edges.begin(), edges.end());
        ++per_graph[edges];
    });
    out.p_simple = Rat(simple_count, M);
    out.num_simple_graphs = per_graph.size();
    if (simple_count == 0) {
        out.vacuous = true;
        out.uniform = true;
        out.detail = "no simple outcome";
        return out;
    }
    out.uniform = true;
    for (const auto& [g, c] : per_graph) {
        if (BigInt(c) != expected) {
            out.uniform = false;
            out.detail = "graph with multiplicity " + std::to_string(c) + " expected " +
                         expected.str();
            return out;
        }
    }
    out.detail = std::to_string(per_graph.size()) + " simple graphs, multiplicity " +
                 expected.str() + " each";
    return out;
}

CouplingLaw exact_coupling_law(const DegreeSequence& ds, const Motif& alpha) {
    const i64 N = ds.N;
    const i64 per_base = grid_size(N, alpha);
    // Base matchings containing alpha: the remaining N - 2e half-edges pair freely.
    const i64 free_N = N - 2 * alpha.num_edges;
    const i64 bases = count_matchings(free_N);
    if (bases * per_base > 10000000)
        throw TooLarge("exact_coupling_law: grid exceeds 1e7 cells");

    CouplingLaw law;
    law.num_matchings = count_matchings(N);
    std::map<std::vector<i64>, i64> hits;
    i64 cells = 0;
    for_each_matching(N, [&](const Matching& g) {
        if (!contains(g, alpha)) return;
        cells += for_each_switch(g, alpha, [&](const Matching& out) { ++hits[out.partner]; });
    });
    law.grid_cells = cells;
    law.uniform = (BigInt(static_cast<i64>(hits.size())) == law.num_matchings);
    i64 expect = cells / static_cast<i64>(hits.empty() ? 1 : hits.size());
    for (const auto& [k, c] : hits)
        if (c != expect) { law.uniform = false; break; }
    if (law.uniform && !hits.empty()) law.per_matching = Rat(expect, cells);
    return law;
}

PairMoments exact_pair_moments(const DegreeSequence& ds, const Motif& alpha, const Motif& beta) {
    const i64 N = ds.N;
    i64 M = 0, count_a = 0, count_b = 0, count_ab = 0;
    const i64 grid = grid_size(N, alpha);
    // Accumulated over base matchings with alpha present: grid counts of
    // J, I_b*(1-J), |I_b - J|.
    BigInt created_cells = 0, destroyed_cells = 0, abs_cells = 0;
    for_each_matching(N, [&](const Matching& g) {
        ++M;
        const bool ia = contains(g, alpha);
        const bool ib = contains(g, beta);
        if (ia) ++count_a;
        if (ib) ++count_b;
        if (ia && ib) ++count_ab;
        if (!ia) return;
        for_each_switch(g, alpha, [&](const Matching& out) {
            const bool j = contains(out, beta);
            if (j) ++created_cells;
            if (ib && !j) ++destroyed_cells;
            if (ib != j) ++abs_cells;
        });
    });
    PairMoments pm;
    const BigInt denom = BigInt(M) * grid;
    pm.created = Rat(created_cells, denom);
    pm.destroyed = Rat(destroyed_cells, denom);
    pm.abs_moment = Rat(abs_cells, denom);
    pm.cov = Rat(count_ab, M) - Rat(count_a, M) * Rat(count_b, M);
    return pm;
}

LhsMomentSums lhs_moment_sums(const DegreeSequence& ds) {
    const i64 N = ds.N;
    if (N > 10) throw TooLarge("lhs_moment_sums: N > 10");
    const bool with_variance = (N <= 8);

    const auto tree_edges = enumerate_motifs(ds, MotifClass::IsolatedEdge);
    const auto tree_stars = enumerate_motifs(ds, MotifClass::IsolatedTwoStar);
    const auto loops = enumerate_motifs(ds, MotifClass::SelfLoop);
    const auto doubles = enumerate_motifs(ds, MotifClass::DoubleEdge);
    std::vector<Motif> trees = tree_edges;
    trees.insert(trees.end(), tree_stars.begin(), tree_stars.end());
    std::vector<Motif> defects = loops;
    defects.insert(defects.end(), doubles.begin(), doubles.end());

    LhsMomentSums out;
    i64 M = 0;

    // Per-(j,k) accumulators for the variance parts: X_jk(g) as exact rationals.
    std::map<StatsKey, std::array<Rat, 4>> class_sum;
    std::map<StatsKey, i64> class_count;
    std::array<Rat, 4> total_sum{};
    std::array<Rat, 4> total_sq{};

    for_each_matching(N, [&](const Matching& g) {
        ++M;
        const MotifStatistics st = census(g, ds);
        const StatsKey wkey = {st.z_edge, st.z_twostar, 0, 0};  // conditioning classes

        std::array<Rat, 4> x{};  // X_jk for (j,k) in row-major {11,12,21,22}
        for (const auto& alpha : trees) {
            if (!contains(g, alpha)) continue;
            const bool alpha_is_edge = (alpha.cls == MotifClass::IsolatedEdge);
            const i64 grid = grid_size(N, alpha);
            // grid sums of J over tree classes, of |I-J| over defect motifs,
            // and of (sum_{b in trees} |I_b - J|)^2.
            i64 j_edges = 0, j_stars = 0;
            BigInt tvd_here = 0, second_here = 0;
            for_each_switch(g, alpha, [&](const Matching& outm) {
                i64 abs_trees = 0;
                for (const auto& beta : tree_edges) {
                    const bool jb = contains(outm, beta);
                    if (jb) ++j_edges;
                    if (contains(g, beta) != jb) ++abs_trees;
                }
                for (const auto& beta : tree_stars) {
                    const bool jb = contains(outm, beta);
                    if (jb) ++j_stars;
                    if (contains(g, beta) != jb) ++abs_trees;
                }
                second_here += BigInt(abs_trees) * abs_trees;
                for (const auto& beta : defects)
                    if (contains(g, beta) != contains(outm, beta)) ++tvd_here;
            });
            // normalize per-alpha by its own grid into the running rationals
            out.tree_vs_defect += Rat(tvd_here, grid);
            out.second_moment += Rat(second_here, grid);
            if (with_variance) {
                const Rat d_edge = st.z_edge - Rat(j_edges, grid);   // sum_b (I_b - E_B J)
                const Rat d_star = st.z_twostar - Rat(j_stars, grid);
                if (alpha_is_edge) {
                    x[0] += d_edge;
                    x[1] += d_star;
                } else {
                    x[2] += d_edge;
                    x[3] += d_star;
                }
            }
        }
        for (const auto& alpha : defects) {
            if (!contains(g, alpha)) continue;
            const i64 grid = grid_size(N, alpha);
            i64 dvt_here = 0, dpair_here = 0;
            for_each_switch(g, alpha, [&](const Matching& outm) {
                for (const auto& beta : trees)
                    if (contains(g, beta) != contains(outm, beta)) ++dvt_here;
                for (const auto& beta : defects) {
                    if (beta == alpha) continue;
                    if (contains(g, beta) != contains(outm, beta)) ++dpair_here;
                }
            });
            out.defect_vs_tree += Rat(dvt_here, grid);
            out.defect_pair += Rat(dpair_here, grid);
        }
        if (with_variance) {
            auto& cs = class_sum[wkey];
            ++class_count[wkey];
            for (int i = 0; i < 4; ++i) {
                cs[i] += x[i];
                total_sum[i] += x[i];
                total_sq[i] += x[i] * x[i];
            }
        }
    });

    // All per-matching sums above still need the 1/M matching weight.
    out.tree_vs_defect /= M;
    out.defect_vs_tree /= M;
    out.second_moment /= M;
    out.defect_pair /= M;
    // First half of the defect-pair sum: sum_a p_a^2.
    for (const auto& alpha : defects) {
        const i64 den = success_denominator(ds, alpha.cls);
        out.defect_pair += Rat(1, den) * Rat(1, den);
    }

    if (with_variance) {
        double cond = 0.0, uncond = 0.0;
        for (int i = 0; i < 4; ++i) {
            const Rat mean = total_sum[i] / M;
            Rat var_cond = 0;
            for (const auto& [k, cs] : class_sum) {
                const i64 c = class_count[k];
                const Rat class_mean = cs[i] / c;
                var_cond += Rat(c, M) * class_mean * class_mean;
            }
            var_cond -= mean * mean;
            const Rat var_uncond = total_sq[i] / M - mean * mean;
            cond += std::sqrt(std::max(0.0, rat_double(var_cond)));
            uncond += std::sqrt(std::max(0.0, rat_double(var_uncond)));
        }
        out.variance_sum_conditional = cond;
        out.variance_sum_unconditional = uncond;
    } else {
        out.variance_sum_conditional = std::nan("");
        out.variance_sum_unconditional = std::nan("");
    }
    return out;
}

} // namespace cm::oracle
