#include "cm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "cm/matching.hpp"
#include "cm/rng.hpp"

namespace cm::experiment {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(trim(tok));
    return out;
}

long long parse_ll(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError("config: bad integer for '" + key + "': " + v);
    }
}

double parse_dbl(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError("config: bad number for '" + key + "': " + v);
    }
}

// A per-slot compensated accumulator for order-fixed reductions.
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

// Partial sums for one fixed chunk of replicates.
struct ChunkAcc {
    std::vector<double> u_sum, u_sumsq;
    std::vector<double> c_sum, c_sumsq;
    std::uint64_t accepted = 0;
    std::uint64_t reps = 0;
};

double trig_of(const stein::TestFunction& h, double t) {
    return h.use_sin ? std::sin(t) : std::cos(t);
}

// E h(Z, N) with Z ~ N(0, sigma) and independent Poisson coordinates; the
// rates may be zero (a zero-rate coordinate is the point mass at 0).
double member_reference(const stein::TestFunction& h, const std::array<double, 4>& sigma,
                        double ls, double lm) {
    const double s[2][2] = {{sigma[0], sigma[1]}, {sigma[2], sigma[3]}};
    double q = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            q += h.a[static_cast<std::size_t>(i)] * h.a[static_cast<std::size_t>(j)] * s[i][j];
    q = std::max(q, 0.0);
    const double gauss = trig_of(h, h.b) * std::exp(-q / 2.0);
    const double lsum = ls + lm;
    double ypart = 1.0;
    switch (h.chi) {
        case stein::TestFunction::Chi::One: ypart = 1.0; break;
        case stein::TestFunction::Chi::IndicatorZero: ypart = std::exp(-lsum); break;
        case stein::TestFunction::Chi::ExpDecay:
            ypart = std::exp(lsum * (std::exp(-h.c) - 1.0));
            break;
        case stein::TestFunction::Chi::CosSum:
            ypart = std::exp(lsum * (std::cos(h.c) - 1.0)) * std::cos(lsum * std::sin(h.c));
            break;
    }
    return gauss * ypart;
}

MemberOutcome finish_member(const std::string& id, double sum, double sumsq,
                            std::uint64_t count, double reference,
                            std::optional<double> bound) {
    MemberOutcome m;
    m.id = id;
    m.reference = reference;
    m.bound = bound;
    if (count > 0) {
        m.empirical = sum / static_cast<double>(count);
        const double var =
            std::max(0.0, sumsq / static_cast<double>(count) - m.empirical * m.empirical);
        m.mc_se = std::sqrt(var / static_cast<double>(count));
    }
    m.abs_diff = std::abs(m.empirical - m.reference);
    m.pass = !bound || m.abs_diff <= *bound + 3.0 * m.mc_se;
    return m;
}

nlohmann::ordered_json member_json(const MemberOutcome& m) {
    nlohmann::ordered_json j;
    j["id"] = m.id;
    j["empirical"] = m.empirical;
    j["reference"] = m.reference;
    j["abs_diff"] = m.abs_diff;
    j["mc_se"] = m.mc_se;
    if (m.bound) j["bound"] = *m.bound;
    else j["bound"] = nullptr;
    j["pass"] = m.pass;
    return j;
}

nlohmann::ordered_json side_json(const SideReport& s) {
    nlohmann::ordered_json j;
    if (s.skipped) {
        j["skipped"] = true;
        j["reason"] = s.reason;
        return j;
    }
    j["skipped"] = false;
    if (s.bound) j["bound"] = *s.bound;
    else j["bound"] = nullptr;
    j["samples"] = s.samples;
    j["max_abs_diff"] = s.max_abs_diff;
    j["pass"] = s.pass;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& m : s.members) arr.push_back(member_json(m));
    j["members"] = arr;
    return j;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("config: expected key=value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) throw ParseError("config: empty value for '" + key + "'");
        if (key == "source") cfg.source = val;
        else if (key == "n") cfg.n = parse_ll(key, val);
        else if (key == "d") cfg.d = static_cast<int>(parse_ll(key, val));
        else if (key == "counts") {
            cfg.counts.clear();
            for (const auto& item : split(val, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos)
                    throw ParseError("config: counts item needs deg:count, got: " + item);
                const int deg = static_cast<int>(parse_ll("counts", item.substr(0, colon)));
                const long long cnt = parse_ll("counts", item.substr(colon + 1));
                if (deg < 0 || cnt <= 0) throw ParseError("config: bad counts item: " + item);
                cfg.counts.emplace_back(deg, cnt);
            }
        } else if (key == "path") cfg.path = val;
        else if (key == "pmf") {
            cfg.pmf.clear();
            for (const auto& item : split(val, ',')) cfg.pmf.push_back(parse_dbl("pmf", item));
        } else if (key == "reps") cfg.reps = static_cast<std::uint64_t>(parse_ll(key, val));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_ll(key, val));
        else if (key == "threads") cfg.threads = static_cast<int>(parse_ll(key, val));
        else if (key == "dict_size") cfg.dict_size = static_cast<int>(parse_ll(key, val));
        else if (key == "mode") cfg.mode = val;
        else if (key == "max_attempts")
            cfg.max_attempts = static_cast<std::uint64_t>(parse_ll(key, val));
        else if (key == "out") cfg.out = val;
        else if (key == "csv") cfg.csv = val;
        else throw ParseError("config: unknown key '" + key + "'");
    }
    if (cfg.source != "regular" && cfg.source != "profile" && cfg.source != "file" &&
        cfg.source != "pmf")
        throw ParseError("config: source must be regular|profile|file|pmf");
    if (cfg.mode != "unconditional" && cfg.mode != "conditional" && cfg.mode != "both")
        throw ParseError("config: mode must be unconditional|conditional|both");
    if (cfg.reps == 0) throw ParseError("config: reps must be >= 1");
    if (cfg.threads < 1 || cfg.threads > 64) throw ParseError("config: threads must be 1..64");
    if (cfg.dict_size < 3 || cfg.dict_size > 40)
        throw ParseError("config: dict_size must be 3..40");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

DegreeSequence build_degrees(const ExperimentConfig& cfg) {
    std::vector<int> degrees;
    if (cfg.source == "regular") {
        if (cfg.n <= 0 || cfg.d < 0) throw ParseError("config: regular needs n >= 1 and d >= 0");
        degrees.assign(static_cast<std::size_t>(cfg.n), cfg.d);
    } else if (cfg.source == "profile") {
        if (cfg.counts.empty()) throw ParseError("config: profile needs counts=");
        for (const auto& [deg, cnt] : cfg.counts)
            degrees.insert(degrees.end(), static_cast<std::size_t>(cnt), deg);
    } else if (cfg.source == "file") {
        if (cfg.path.empty()) throw ParseError("config: file source needs path=");
        return DegreeSequence::build(load_degrees(cfg.path));
    } else {  // pmf
        if (cfg.n <= 0 || cfg.pmf.empty()) throw ParseError("config: pmf source needs n and pmf=");
        double total = 0.0;
        for (double p : cfg.pmf) {
            if (p < 0.0) throw ParseError("config: pmf entries must be >= 0");
            total += p;
        }
        if (!(total > 0.0)) throw ParseError("config: pmf must have positive mass");
        // Largest-remainder apportionment of n vertices across degrees.
        const std::size_t K = cfg.pmf.size();
        std::vector<long long> base(K, 0);
        std::vector<std::pair<double, std::size_t>> rem;
        long long assigned = 0;
        for (std::size_t k = 0; k < K; ++k) {
            const double quota = static_cast<double>(cfg.n) * cfg.pmf[k] / total;
            base[k] = static_cast<long long>(std::floor(quota));
            assigned += base[k];
            rem.emplace_back(quota - std::floor(quota), k);
        }
        std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (long long left = cfg.n - assigned; left > 0; --left)
            ++base[rem[static_cast<std::size_t>(cfg.n - assigned - left)].second];
        for (std::size_t k = 0; k < K; ++k)
            degrees.insert(degrees.end(), static_cast<std::size_t>(base[k]),
                           static_cast<int>(k));
    }
    return DegreeSequence::build(degrees);
}

std::string census_csv_header() {
    return "rep,z_edge,z_twostar,s_loops,m_doubles,simple,w_edge,w_twostar";
}

std::string census_csv_row(std::uint64_t rep, const MotifStatistics& stats, double w_edge,
                           double w_twostar) {
    std::ostringstream os;
    os.precision(17);
    os << rep << ',' << stats.z_edge << ',' << stats.z_twostar << ',' << stats.s_loops << ','
       << stats.m_doubles << ',' << (stats.simple ? 1 : 0) << ',' << w_edge << ',' << w_twostar;
    return os.str();
}

DiscrepancyReport run_experiment(const ExperimentConfig& cfg) {
    const DegreeSequence ds = build_degrees(cfg);
    DiscrepancyReport rep;
    rep.n = ds.n();
    rep.N = ds.N;
    rep.reps = cfg.reps;
    rep.seed = cfg.seed;
    rep.theory = theory::approximation_bounds(ds);
    const auto sigma = theory::covariance(ds);
    const double ls = rep.theory.moments.lambda_s;
    const double lm = rep.theory.moments.lambda_m;

    const bool want_uncond = cfg.mode == "unconditional" || cfg.mode == "both";
    const bool want_cond = cfg.mode == "conditional" || cfg.mode == "both";
    const auto u_dict = stein::make_dictionary(2, 2, cfg.dict_size);
    const auto c_dict = stein::make_x_dictionary(2, std::min(cfg.dict_size, 8));
    const std::size_t nu = u_dict.size(), nc = c_dict.size();

    // One chunk of replicates: fixed substream per replicate, so the result
    // is independent of how chunks are distributed over threads.
    const std::uint64_t kChunk = 65536;
    const std::uint64_t nchunks = (cfg.reps + kChunk - 1) / kChunk;
    auto run_chunk = [&](std::uint64_t ci, std::ostream* csv) {
        ChunkAcc acc;
        acc.u_sum.assign(nu, 0.0);
        acc.u_sumsq.assign(nu, 0.0);
        acc.c_sum.assign(nc, 0.0);
        acc.c_sumsq.assign(nc, 0.0);
        const std::uint64_t lo = ci * kChunk;
        const std::uint64_t hi = std::min(cfg.reps, lo + kChunk);
        stein::XVec x(2);
        stein::YVec y(2);
        for (std::uint64_t r = lo; r < hi; ++r) {
            Rng rng = make_rng(cfg.seed, r);
            const Matching g = sample_uniform(ds, rng);
            const MotifStatistics st = census(g, ds);
            const auto [w1, w2] = normalize(st, ds);
            x[0] = w1;
            x[1] = w2;
            y[0] = st.s_loops;
            y[1] = st.m_doubles;
            for (std::size_t m = 0; m < nu; ++m) {
                const double v = u_dict[m](x, y);
                acc.u_sum[m] += v;
                acc.u_sumsq[m] += v * v;
            }
            if (st.simple) {
                ++acc.accepted;
                for (std::size_t m = 0; m < nc; ++m) {
                    const double v = c_dict[m](x, y);
                    acc.c_sum[m] += v;
                    acc.c_sumsq[m] += v * v;
                }
            }
            ++acc.reps;
            if (csv) (*csv) << census_csv_row(r, st, w1, w2) << "\n";
        }
        return acc;
    };

    std::vector<ChunkAcc> parts(nchunks);
    if (!cfg.csv.empty() || cfg.threads == 1 || nchunks == 1) {
        std::ofstream csv;
        if (!cfg.csv.empty()) {
            csv.open(cfg.csv);
            if (!csv) throw Error("cannot open census csv " + cfg.csv);
            csv << census_csv_header() << "\n";
        }
        for (std::uint64_t ci = 0; ci < nchunks; ++ci)
            parts[ci] = run_chunk(ci, cfg.csv.empty() ? nullptr : &csv);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (std::uint64_t ci = next.fetch_add(1); ci < nchunks; ci = next.fetch_add(1))
                parts[ci] = run_chunk(ci, nullptr);
        };
        const int nthreads = static_cast<int>(
            std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.threads), nchunks));
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Order-fixed compensated reduction.
    std::vector<Kahan> u_sum(nu), u_sumsq(nu), c_sum(nc), c_sumsq(nc);
    std::uint64_t accepted = 0;
    for (const auto& p : parts) {
        for (std::size_t m = 0; m < nu; ++m) {
            u_sum[m].add(p.u_sum[m]);
            u_sumsq[m].add(p.u_sumsq[m]);
        }
        for (std::size_t m = 0; m < nc; ++m) {
            c_sum[m].add(p.c_sum[m]);
            c_sumsq[m].add(p.c_sumsq[m]);
        }
        accepted += p.accepted;
    }

    // Simplicity row: empirical P(simple) against the Poisson-limit value.
    {
        const double p_hat = static_cast<double>(accepted) / static_cast<double>(cfg.reps);
        MemberOutcome m;
        m.id = "p_simple";
        m.empirical = p_hat;
        m.reference = rep.theory.p_simple_poisson;
        m.abs_diff = std::abs(p_hat - m.reference);
        m.mc_se = std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) /
                            static_cast<double>(cfg.reps));
        m.bound = rep.theory.bound_b.value;
        m.pass = !m.bound || m.abs_diff <= *m.bound + 3.0 * m.mc_se;
        rep.simplicity = m;
    }

    if (!want_uncond) {
        rep.unconditional.skipped = true;
        rep.unconditional.reason = "not requested";
    } else if (!rep.theory.bound_a.value) {
        rep.unconditional.skipped = true;
        rep.unconditional.reason = rep.theory.bound_a.why;
    } else {
        rep.unconditional.bound = rep.theory.bound_a.value;
        rep.unconditional.samples = cfg.reps;
        for (std::size_t m = 0; m < nu; ++m) {
            const double ref = member_reference(u_dict[m], sigma, ls, lm);
            auto out = finish_member(u_dict[m].id, u_sum[m].s, u_sumsq[m].s, cfg.reps, ref,
                                     rep.unconditional.bound);
            rep.unconditional.max_abs_diff = std::max(rep.unconditional.max_abs_diff, out.abs_diff);
            rep.unconditional.pass = rep.unconditional.pass && out.pass;
            rep.unconditional.members.push_back(std::move(out));
        }
    }

    if (!want_cond) {
        rep.conditional.skipped = true;
        rep.conditional.reason = "not requested";
    } else {
        std::optional<double> cb;
        if (rep.theory.bound_c.value) cb = *rep.theory.bound_c.value;
        if (rep.theory.bound_c2.value)
            cb = cb ? std::min(*cb, *rep.theory.bound_c2.value) : *rep.theory.bound_c2.value;
        if (!cb) {
            rep.conditional.skipped = true;
            rep.conditional.reason = rep.theory.bound_c.why;
        } else if (accepted == 0) {
            rep.conditional.skipped = true;
            rep.conditional.reason = "no simple outcomes in the sample";
        } else {
            rep.conditional.bound = cb;
            rep.conditional.samples = accepted;
            for (std::size_t m = 0; m < nc; ++m) {
                const double ref = member_reference(c_dict[m], sigma, ls, lm);
                auto out =
                    finish_member(c_dict[m].id, c_sum[m].s, c_sumsq[m].s, accepted, ref, cb);
                rep.conditional.max_abs_diff =
                    std::max(rep.conditional.max_abs_diff, out.abs_diff);
                rep.conditional.pass = rep.conditional.pass && out.pass;
                rep.conditional.members.push_back(std::move(out));
            }
        }
    }

    rep.pass = rep.simplicity.pass && (rep.unconditional.skipped || rep.unconditional.pass) &&
               (rep.conditional.skipped || rep.conditional.pass);
    return rep;
}

nlohmann::ordered_json discrepancy_json(const ExperimentConfig& cfg,
                                        const DiscrepancyReport& rep) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json c;
    c["source"] = cfg.source;
    if (cfg.source == "regular") {
        c["n"] = cfg.n;
        c["d"] = cfg.d;
    } else if (cfg.source == "profile") {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [deg, cnt] : cfg.counts) arr.push_back({{"degree", deg}, {"count", cnt}});
        c["counts"] = arr;
    } else if (cfg.source == "file") {
        c["path"] = cfg.path;
    } else {
        c["n"] = cfg.n;
        c["pmf"] = cfg.pmf;
    }
    c["reps"] = cfg.reps;
    c["seed"] = cfg.seed;
    c["threads"] = cfg.threads;
    c["dict_size"] = cfg.dict_size;
    c["mode"] = cfg.mode;
    j["config"] = c;
    j["n"] = rep.n;
    j["N"] = rep.N;
    j["theory"] = nlohmann::ordered_json::parse(theory::theory_report_json(rep.theory));
    j["simplicity"] = member_json(rep.simplicity);
    j["unconditional"] = side_json(rep.unconditional);
    j["conditional"] = side_json(rep.conditional);
    j["pass"] = rep.pass;
    return j;
}

} // namespace cm::experiment
