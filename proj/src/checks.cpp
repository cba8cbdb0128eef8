#include "cm/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "cm/combinatorics.hpp"
#include "cm/experiment.hpp"
#include "cm/matching.hpp"
#include "cm/oracle.hpp"
#include "cm/rng.hpp"
#include "cm/stein.hpp"
#include "cm/theory.hpp"

namespace cm::checks {

namespace {

using oracle::Rat;

template <typename Fn>
Result timed(const std::string& name, Fn&& body) {
    Result r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.skipped = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::vector<Motif> all_motifs(const DegreeSequence& ds) {
    std::vector<Motif> out;
    for (MotifClass cls : kMotifClasses) {
        auto part = enumerate_motifs(ds, cls);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// P(both motifs present, second destroyed by the re-pairing) for motifs
// sharing no half-edge: 1/((N-1))_{e_a+e_b} * (1 - prod_l (1 - 2 e_b / R_l)).
Rat destroyed_formula(i64 N, int ea, int eb) {
    const i64 denom = double_falling(N - 1, ea + eb);
    Rat prod = 1;
    for (int l = 1; l <= ea; ++l) {
        const i64 range = N - 2 * (ea - l) - 1;
        prod *= Rat(range - 2 * eb, range);
    }
    return Rat(1, denom) * (Rat(1) - prod);
}

// Same moment for two double edges sharing exactly one matched pair.
Rat common_edge_formula(i64 N) {
    return Rat(1, double_falling(N - 1, 3)) *
           (Rat(1) - Rat(N - 5, double_falling(N - 1, 2)));
}

const std::vector<std::vector<int>>& small_suite() {
    static const std::vector<std::vector<int>> suite = {
        {2},
        {1, 1},
        {4},
        {1, 1, 2},
        {2, 2},
        {1, 1, 1, 1},
        {3, 3},
        {2, 2, 2},
        {3, 2, 1},
        {1, 1, 1, 1, 2},
        {2, 2, 1, 1},
        {1, 1, 1, 1, 1, 1},
        {3, 3, 1, 1},
        {2, 2, 2, 2},
        {4, 2, 1, 1},
        {3, 2, 2, 1},
        {2, 2, 2, 1, 1},
        {4, 4},
        {1, 1, 1, 1, 1, 1, 1, 1},
        {3, 3, 2, 2},
        {4, 4, 1, 1},
        {4, 2, 2, 2},
        {2, 2, 2, 2, 2},
        {5, 1, 1, 1, 1, 1},
        {3, 3, 3, 1},
        {4, 3, 2, 1},
        {1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
    };
    return suite;
}

// ---- numerical machinery fixtures --------------------------------------

struct SteinSet {
    std::string name;
    stein::Params params;
    std::vector<stein::TestFunction> dict;
    std::vector<std::pair<stein::XVec, stein::YVec>> grid;
};

std::vector<SteinSet> stein_sets(bool full) {
    const int dict_size = full ? 12 : 6;
    std::vector<SteinSet> sets;

    auto grid1 = [&] {
        std::vector<std::pair<stein::XVec, stein::YVec>> g;
        for (double x : {-1.2, 0.4, 1.5})
            for (long long y : {0LL, 1LL, 3LL}) g.push_back({{x}, {y}});
        if (!full) g.resize(4);
        return g;
    };
    auto grid2 = [&] {
        std::vector<std::pair<stein::XVec, stein::YVec>> g;
        const std::vector<stein::XVec> xs = {{0.0, 0.0}, {1.0, -0.7}, {-1.3, 0.5}};
        const std::vector<stein::YVec> ys = {{0, 0}, {1, 0}, {2, 1}};
        for (const auto& x : xs)
            for (const auto& y : ys) g.push_back({x, y});
        if (!full) g.resize(4);
        return g;
    };

    if (full)
        sets.push_back({"d1-identity", stein::Params::make(1, {1.0}, {1.0}),
                        stein::make_dictionary(1, 1, dict_size), grid1()});
    sets.push_back({"d2-identity", stein::Params::make(2, {1.0, 0.0, 0.0, 1.0}, {0.5, 2.0}),
                    stein::make_dictionary(2, 2, dict_size), grid2()});
    if (full)
        sets.push_back({"d2-rank1", stein::Params::make(2, {1.0, 1.0, 1.0, 1.0}, {0.5, 2.0}),
                        stein::make_dictionary(2, 2, dict_size), grid2()});
    return sets;
}

void run_residual(Result& r, bool full) {
    double worst = 0.0;
    std::string where;
    for (const auto& set : stein_sets(full)) {
        for (const auto& h : set.dict) {
            for (const auto& [x, y] : set.grid) {
                const double res = stein::generator_residual(h, x, y, set.params);
                if (res > worst) {
                    worst = res;
                    std::ostringstream os;
                    os << set.name << " h=" << h.id << " x=" << x[0];
                    if (x.size() > 1) os << "," << x[1];
                    os << " y=" << y[0];
                    if (y.size() > 1) os << "," << y[1];
                    where = os.str();
                }
            }
        }
    }
    r.pass = worst <= 5e-3;
    r.detail = "max |generator(f) - (h - ref)| = " + fmt(worst) + " at " + where +
               " (tolerance 5e-3)";
}

// The smoothness probe solves the equation at every finite-difference stencil
// point, so it is far costlier per member than the residual check.  Thin each
// residual set to a chi-covering sample of members (every chi flavor appears,
// both trig phases, plus any x-constant member) and a four-point grid that
// still mixes y = 0 (where the improved indicator bounds are live) with
// shifted x and nonzero y.
std::vector<SteinSet> probe_sets(bool full) {
    auto sets = stein_sets(full);
    if (!full) return sets;
    for (auto& set : sets) {
        using Chi = stein::TestFunction::Chi;
        // coverage slots: plain gaussian part, indicator with and without a
        // live x-part, both decaying chi flavors, and a live cosine phase
        auto slot = [](const stein::TestFunction& h) -> int {
            if (h.chi == Chi::One) return 0;
            if (h.chi == Chi::IndicatorZero) return h.constant_in_x() ? 1 : 2;
            if (h.chi == Chi::ExpDecay) return 3;
            return 4;
        };
        std::vector<stein::TestFunction> kept;
        bool filled[6] = {};
        for (const auto& h : set.dict) {
            const int s = slot(h);
            const bool live_cos = !h.use_sin && !h.constant_in_x();
            if (filled[s] && (!live_cos || filled[5])) continue;
            filled[s] = true;
            if (live_cos) filled[5] = true;
            kept.push_back(h);
        }
        set.dict = std::move(kept);
        // origin, x-shift at y = 0, and two y-shifted points
        std::vector<std::pair<stein::XVec, stein::YVec>> g = {set.grid[0], set.grid[3],
                                                              set.grid[1], set.grid[8]};
        set.grid = std::move(g);
    }
    return sets;
}

void run_probe(Result& r, bool full) {
    double worst_margin = 1e9;
    std::string where;
    std::size_t rows = 0;
    for (const auto& set : probe_sets(full)) {
        auto probe = stein::smoothness_probe(set.params, set.dict, set.grid);
        rows += probe.size();
        for (const auto& row : probe) {
            if (row.margin < worst_margin) {
                worst_margin = row.margin;
                where = set.name + " h=" + row.h_id + " " + row.quantity + " measured=" +
                        fmt(row.measured) + " bound=" + fmt(row.bound);
            }
        }
    }
    r.pass = worst_margin >= -1e-3;
    r.detail = std::to_string(rows) + " probes; worst margin " + fmt(worst_margin) + " at " +
               where + " (allowance -1e-3)";
}

experiment::ExperimentConfig profile20_config(std::uint64_t seed, const std::string& mode) {
    experiment::ExperimentConfig cfg;
    cfg.source = "profile";
    cfg.counts = {{1, 10}, {2, 5}, {3, 4}, {4, 1}};
    cfg.reps = 1000000;
    cfg.seed = seed;
    cfg.mode = mode;
    cfg.dict_size = 12;
    return cfg;
}

} // namespace

Result criterion1() {
    return timed("01_cardinality_identities", [](Result& r) {
        Rng rng = make_rng(20260817, 1);
        int checked = 0;
        for (int trial = 0; trial < 60; ++trial) {
            const int n = static_cast<int>(uniform_int(rng, 2, 40));
            std::vector<int> degs(static_cast<std::size_t>(n));
            for (auto& d : degs) d = static_cast<int>(uniform_int(rng, 0, 4));
            i64 total = 0;
            for (int d : degs) total += d;
            if (total % 2 != 0) {
                ++degs[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))];
                ++total;
            }
            if (total > 200) continue;
            const auto ds = DegreeSequence::build(degs);
            const auto closed = class_counts(ds);
            for (std::size_t c = 0; c < 4; ++c) {
                const auto listed =
                    static_cast<i64>(enumerate_motifs(ds, kMotifClasses[c]).size());
                if (listed != closed[c]) {
                    r.pass = false;
                    r.detail = "mismatch for class " +
                               std::string(name_of(kMotifClasses[c])) + ": closed form " +
                               std::to_string(closed[c]) + ", enumerated " +
                               std::to_string(listed);
                    return;
                }
            }
            ++checked;
        }
        r.pass = checked >= 50;
        r.detail = std::to_string(checked) + " random degree sequences (N <= 200), " +
                   "all four index-set sizes match the closed forms exactly";
        if (!r.pass) r.detail += " — fewer than 50 sequences generated";
    });
}

Result criterion2() {
    return timed("02_uniform_simple", [](Result& r) {
        int checked = 0, vacuous = 0;
        for (const auto& degs : small_suite()) {
            const auto ds = DegreeSequence::build(degs);
            if (ds.N > 10) continue;
            const auto chk = oracle::uniform_simple_check(ds);
            if (!chk.uniform) {
                r.pass = false;
                r.detail = "non-uniform conditional law: " + chk.detail;
                return;
            }
            if (chk.vacuous) ++vacuous;
            ++checked;
        }
        r.pass = checked >= 20;
        r.detail = std::to_string(checked) + " degree sequences (N <= 10): every simple graph " +
                   "has matching multiplicity prod d_i! exactly (" + std::to_string(vacuous) +
                   " with no simple outcome)";
    });
}

Result criterion3() {
    return timed("03_coupling_law", [](Result& r) {
        const std::vector<std::vector<int>> suite = {
            {1, 1, 2}, {1, 1, 1, 1}, {1, 1, 1, 1, 2}, {2, 2, 1, 1}, {3, 3}};
        int motifs = 0;
        for (const auto& degs : suite) {
            const auto ds = DegreeSequence::build(degs);
            const Rat expected = Rat(1, count_matchings(ds.N));
            for (const auto& alpha : all_motifs(ds)) {
                const auto law = oracle::exact_coupling_law(ds, alpha);
                if (!law.uniform || law.per_matching != expected) {
                    r.pass = false;
                    r.detail = "switched-copy law not uniform for " + alpha.str() +
                               " (per-matching " + oracle::rat_str(law.per_matching) +
                               ", expected " + oracle::rat_str(expected) + ")";
                    return;
                }
                ++motifs;
            }
        }
        r.pass = true;
        r.detail = std::to_string(motifs) +
                   " motifs across 5 degree sequences: conditional law of the switched copy "
                   "is exactly uniform over all matchings";
    });
}

Result criterion4() {
    return timed("04_exact_covariance", [](Result& r) {
        const std::vector<std::vector<int>> suite = {
            {1, 1, 2},          {1, 1, 1, 1},    {1, 1, 1, 1, 2}, {2, 2, 1, 1},
            {3, 3},             {2, 2, 2},       {3, 2, 1},       {3, 2, 2, 1},
            {1, 1, 1, 1, 1, 1}, {3, 3, 1, 1},    {4, 2, 1, 1},    {2, 2, 2, 1, 1}};
        double worst = 0.0;
        for (const auto& degs : suite) {
            const auto ds = DegreeSequence::build(degs);
            const auto law = oracle::exact_law(ds);
            const auto sig = theory::covariance(ds);
            const double o11 = oracle::rat_double(law.cov_w11);
            const double o12 = oracle::rat_double(law.cov_w12);
            const double o22 = oracle::rat_double(law.cov_w22);
            worst = std::max({worst, std::abs(sig[0] - o11), std::abs(sig[1] - o12),
                              std::abs(sig[2] - o12), std::abs(sig[3] - o22)});
            if (worst > 1e-10) {
                r.pass = false;
                r.detail = "covariance mismatch on a profile with N = " + std::to_string(ds.N) +
                           ": max abs deviation " + fmt(worst);
                return;
            }
        }
        // Degenerate profile: the edge-count variance vanishes identically.
        const auto deg_ds = DegreeSequence::build({1, 1, 1, 1});
        const auto deg_law = oracle::exact_law(deg_ds);
        const bool degenerate_ok =
            deg_law.cov_w11 == 0 && std::abs(theory::covariance(deg_ds)[0]) <= 1e-15;
        r.pass = degenerate_ok;
        r.detail = std::to_string(suite.size()) + " profiles (N <= 10), max abs deviation " +
                   fmt(worst) + " (tolerance 1e-10); degenerate all-ones profile has " +
                   "exactly zero edge variance: " + (degenerate_ok ? "yes" : "NO");
    });
}

Result criterion5() {
    return timed("05_pair_moment_formulas", [](Result& r) {
        struct Fixture {
            std::vector<int> degs;
            Motif alpha, beta;
            Rat expected;
        };
        const std::vector<Fixture> fixtures = {
            // two disjoint isolated edges
            {{1, 1, 1, 1},
             Motif::make(MotifClass::IsolatedEdge, {1, 2}),
             Motif::make(MotifClass::IsolatedEdge, {3, 4}),
             Rat(2, 9)},
            // isolated edge vs disjoint isolated 2-star
            {{1, 1, 1, 1, 2},
             Motif::make(MotifClass::IsolatedEdge, {1, 2}),
             Motif::make(MotifClass::IsolatedTwoStar, {3, 5}, {4, 6}),
             Rat(4, 75)},
            // 2-star vs disjoint edge (reverse orientation, same value)
            {{1, 1, 1, 1, 2},
             Motif::make(MotifClass::IsolatedTwoStar, {3, 5}, {4, 6}),
             Motif::make(MotifClass::IsolatedEdge, {1, 2}),
             Rat(4, 75)},
            // isolated edge vs self-loop
            {{2, 2, 1, 1},
             Motif::make(MotifClass::IsolatedEdge, {5, 6}),
             Motif::make(MotifClass::SelfLoop, {1, 2}),
             Rat(2, 75)},
            // two disjoint 2-stars at N = 8
            {{2, 2, 1, 1, 1, 1},
             Motif::make(MotifClass::IsolatedTwoStar, {1, 5}, {2, 6}),
             Motif::make(MotifClass::IsolatedTwoStar, {3, 7}, {4, 8}),
             Rat(32, 3675)},
        };
        for (const auto& fx : fixtures) {
            const auto ds = DegreeSequence::build(fx.degs);
            const auto mom = oracle::exact_pair_moments(ds, fx.alpha, fx.beta);
            const Rat formula =
                destroyed_formula(ds.N, fx.alpha.num_edges, fx.beta.num_edges);
            if (mom.destroyed != fx.expected || formula != fx.expected) {
                r.pass = false;
                r.detail = "disjoint destruction mismatch for " + fx.alpha.str() + " vs " +
                           fx.beta.str() + ": grid " + oracle::rat_str(mom.destroyed) +
                           ", formula " + oracle::rat_str(formula) + ", expected " +
                           oracle::rat_str(fx.expected);
                return;
            }
        }
        // two double edges sharing exactly one matched pair
        const auto ds33 = DegreeSequence::build({3, 3});
        const auto a = Motif::make(MotifClass::DoubleEdge, {1, 4}, {2, 5});
        const auto b = Motif::make(MotifClass::DoubleEdge, {1, 4}, {3, 6});
        const auto mom = oracle::exact_pair_moments(ds33, a, b);
        const Rat expect(14, 225);
        const bool ok = mom.destroyed == expect && mom.abs_moment == expect &&
                        common_edge_formula(ds33.N) == expect;
        r.pass = ok;
        r.detail = std::string("5 disjoint-pair fixtures exact; common-edge moment ") +
                   oracle::rat_str(mom.destroyed) + " == 14/225: " + (ok ? "yes" : "NO");
    });
}

Result criterion6() {
    return timed("06_symmetry", [](Result& r) {
        const std::vector<std::vector<int>> suite = {
            {1, 1, 2},      {2, 2},          {1, 1, 1, 1},  {3, 3},
            {2, 2, 2},      {3, 2, 1},       {1, 1, 1, 1, 2}, {2, 2, 1, 1},
            {3, 3, 1, 1},   {4, 2, 1, 1},    {3, 2, 2, 1},  {2, 2, 2, 1, 1},
            {2, 2, 2, 2},   {4, 4},          {1, 1, 1, 1, 1, 1, 1, 1}};
        i64 pairs = 0;
        for (const auto& degs : suite) {
            const auto ds = DegreeSequence::build(degs);
            const auto motifs = all_motifs(ds);
            for (std::size_t i = 0; i < motifs.size(); ++i)
                for (std::size_t j = 0; j < motifs.size(); ++j) {
                    if (i == j) continue;
                    const auto& a = motifs[i];
                    const auto& b = motifs[j];
                    const auto mom = oracle::exact_pair_moments(ds, a, b);
                    const Rat p_ab = Rat(1, success_denominator(ds, a.cls)) *
                                     Rat(1, success_denominator(ds, b.cls));
                    // E[I_a (I_b - J_b|a)] = Cov(I_a, I_b) + p_a p_b - E[I_a J_b|a],
                    // so the symmetry identity holds iff E[I_a J_b|a] = p_a p_b.
                    if (mom.created != p_ab) {
                        r.pass = false;
                        r.detail = "symmetry violated for " + a.str() + " vs " + b.str() +
                                   ": E[I J] = " + oracle::rat_str(mom.created) +
                                   ", p_a p_b = " + oracle::rat_str(p_ab);
                        return;
                    }
                    ++pairs;
                }
        }
        r.pass = true;
        r.detail = std::to_string(pairs) +
                   " ordered motif pairs (N <= 8): E[I_a(I_b - J_b|a)] equals Cov(I_a, I_b) "
                   "exactly";
    });
}

Result criterion7() {
    return timed("07_poisson_unimodality", [](Result& r) {
        for (double lambda : {0.3, 0.5, 1.0, 2.3, 7.7})
            stein::poisson_unimodal_tv(lambda);  // throws if the identity fails at 1e-12
        const double tv1 = stein::poisson_unimodal_tv(1.0);
        r.pass = std::abs(tv1 - 2.0 * std::exp(-1.0)) <= 1e-12;
        r.detail = "identity sum |p_k - p_{k-1}| = 2 p_{floor(lambda)} verified to 1e-12 for "
                   "lambda in {0.3, 0.5, 1, 2.3, 7.7}; tv(1) = " + fmt(tv1);
    });
}

Result criterion8() {
    return timed("08_stein_residual", [](Result& r) { run_residual(r, true); });
}

Result criterion9() {
    return timed("09_smoothness_bounds", [](Result& r) { run_probe(r, true); });
}

Result criterion10() {
    return timed("10_simplicity_bound", [](Result& r) {
        auto cfg1 = profile20_config(20101, "unconditional");
        const auto rep1 = experiment::run_experiment(cfg1);

        experiment::ExperimentConfig cfg2;
        cfg2.source = "regular";
        cfg2.n = 8;
        cfg2.d = 3;
        cfg2.reps = 1000000;
        cfg2.seed = 20102;
        cfg2.mode = "unconditional";
        const auto rep2 = experiment::run_experiment(cfg2);

        r.pass = rep1.simplicity.pass && rep2.simplicity.pass;
        r.detail = "profile n=20/N=36: |diff| " + fmt(rep1.simplicity.abs_diff) + " <= bound " +
                   fmt(rep1.simplicity.bound.value_or(-1)) + " + 3se; 3-regular n=8: |diff| " +
                   fmt(rep2.simplicity.abs_diff) + " <= bound " +
                   fmt(rep2.simplicity.bound.value_or(-1)) + " + 3se (R = 1e6 each)";
    });
}

Result criterion11() {
    return timed("11_dictionary_bounds", [](Result& r) {
        // Prescribed profile: the unconditional dictionary bound must engage and
        // hold; the conditional bound's hypothesis (positive lower bound on the
        // simplicity probability) fails here, so that side must be a reported
        // skip, not a silent pass.
        auto cfg = profile20_config(31415, "both");
        const auto rep = experiment::run_experiment(cfg);
        const bool uncond_ok = !rep.unconditional.skipped && rep.unconditional.pass &&
                               rep.simplicity.pass;
        const bool cond_skip_ok = rep.conditional.skipped && !rep.conditional.reason.empty();

        // Dilute profile with a valid conditional hypothesis: the rejection-
        // sampled conditional comparison must engage and hold.
        experiment::ExperimentConfig cfg2;
        cfg2.source = "profile";
        cfg2.counts = {{1, 96}, {2, 4}};
        cfg2.reps = 1000000;
        cfg2.seed = 27182;
        cfg2.mode = "both";
        cfg2.dict_size = 12;
        const auto rep2 = experiment::run_experiment(cfg2);
        const bool cond_ok = !rep2.conditional.skipped && rep2.conditional.pass &&
                             rep2.unconditional.pass;

        r.pass = uncond_ok && cond_skip_ok && cond_ok;
        r.detail = "n=20/N=36: unconditional max |diff| " + fmt(rep.unconditional.max_abs_diff) +
                   " <= bound " + fmt(rep.unconditional.bound.value_or(-1)) +
                   "; conditional skipped there (" + rep.conditional.reason +
                   "); dilute n=100/N=104: conditional max |diff| " +
                   fmt(rep2.conditional.max_abs_diff) + " <= bound " +
                   fmt(rep2.conditional.bound.value_or(-1)) + " on " +
                   std::to_string(rep2.conditional.samples) + " accepted (R = 1e6 each)";
    });
}

Result criterion12() {
    return timed("12_bound_trend", [](Result& r) {
        // As stated, this check needs the unconditional dictionary bound on
        // 3-regular sequences, which have no degree-1 or degree-2 vertices.
        std::vector<theory::TheoryReport> reports;
        std::vector<double> waived;  // formula value with the degree-count
                                     // precondition waived (minimal c* = 0)
        for (int n : {32, 64, 128, 256}) {
            const auto ds = DegreeSequence::build(std::vector<int>(static_cast<std::size_t>(n), 3));
            reports.push_back(theory::approximation_bounds(ds));
            const auto m = theory::moment_parameters(ds);
            const double lmin = std::min(m.lambda_s, m.lambda_m);
            const double e1 = std::exp(1.0);
            const double f3 =
                lmin > 0
                    ? std::min(2.0, (4.0 + 4.0 * std::max(0.0, std::log(e1 * lmin))) / (e1 * lmin))
                    : 2.0;
            waived.push_back(f3 * theory::delta_simple(ds));
        }
        bool defined = true;
        for (const auto& rep : reports) defined = defined && rep.bound_a.value.has_value();
        std::ostringstream os;
        if (defined) {
            bool ok = true;
            for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
                const double ratio = *reports[i + 1].bound_a.value / *reports[i].bound_a.value;
                ok = ok && ratio >= 0.5 && ratio <= 0.95;
                os << (i ? ", " : "") << fmt(ratio);
            }
            r.pass = ok;
            r.detail = "halving ratios " + os.str() + " (required within [0.5, 0.95])";
        } else {
            // Faithful outcome: the bound is undefined on regular sequences
            // (no degree-1 vertices), and even with that precondition waived
            // the minimal admissible constant is zero, leaving only the
            // simplicity-error term, whose halving ratios fall below 0.5.
            for (std::size_t i = 0; i + 1 < waived.size(); ++i)
                os << (i ? ", " : "") << fmt(waived[i + 1] / waived[i]);
            r.pass = false;
            r.detail = "unconditional bound undefined on 3-regular profiles (" +
                       reports[0].bound_a.why +
                       "); with that precondition waived the ratios are " + os.str() +
                       " — below [0.5, 0.95]; see README.md (known red)";
        }
    });
}

Result criterion13() {
    return timed("13_determinism", [](Result& r) {
        auto cfg = profile20_config(31415, "both");
        const auto j1 = experiment::discrepancy_json(cfg, experiment::run_experiment(cfg)).dump(2);
        const auto j2 = experiment::discrepancy_json(cfg, experiment::run_experiment(cfg)).dump(2);
        auto cfg4 = cfg;
        cfg4.threads = 4;
        const auto j4 =
            experiment::discrepancy_json(cfg4, experiment::run_experiment(cfg4)).dump(2);
        // The thread count is part of the config echo; strip that one line
        // before comparing the 1-thread and 4-thread reports.
        auto strip_threads = [](std::string s) {
            const auto pos = s.find("\"threads\"");
            if (pos == std::string::npos) return s;
            const auto end = s.find('\n', pos);
            return s.substr(0, pos) + s.substr(end + 1);
        };
        const bool same_seed = j1 == j2;
        const bool same_threads = strip_threads(j1) == strip_threads(j4);
        r.pass = same_seed && same_threads;
        r.detail = std::string("same seed twice: ") + (same_seed ? "byte-identical" : "DIFFER") +
                   "; 1 thread vs 4 threads: " +
                   (same_threads ? "byte-identical (modulo config echo)" : "DIFFER");
    });
}

std::vector<Result> run_all() {
    return {criterion1(), criterion2(), criterion3(), criterion4(), criterion5(),
            criterion6(), criterion7(), criterion8(), criterion9(), criterion10(),
            criterion11(), criterion12(), criterion13()};
}

std::vector<Result> verify_coupling() { return {criterion3(), criterion5(), criterion6()}; }

std::vector<Result> verify_formulas() {
    return {criterion1(), criterion2(), criterion4(), criterion12()};
}

std::vector<Result> verify_stein(bool full) {
    std::vector<Result> out;
    out.push_back(criterion7());
    out.push_back(timed(full ? "stein_residual" : "stein_residual_smoke",
                        [&](Result& r) { run_residual(r, full); }));
    out.push_back(timed(full ? "smoothness_bounds" : "smoothness_bounds_smoke",
                        [&](Result& r) { run_probe(r, full); }));
    return out;
}

std::string format_results(const std::vector<Result>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        const char* tag = r.skipped ? "[SKIP]" : (r.pass ? "[PASS]" : "[FAIL]");
        os << tag << " " << r.name << " (" << std::fixed << std::setprecision(2) << r.seconds
           << "s) " << r.detail << "\n";
        os.unsetf(std::ios::fixed);
    }
    return os.str();
}

bool all_pass(const std::vector<Result>& results) {
    for (const auto& r : results)
        if (!r.pass && !r.skipped) return false;
    return true;
}

} // namespace cm::checks
