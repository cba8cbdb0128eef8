#include "cm/theory.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace cm::theory {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

// sum_i (d_i)_r as a double (exact for the integer ranges we evaluate).
double degree_power_sum(const DegreeSequence& ds, int r) {
    double s = 0.0;
    for (int d : ds.degrees) s += static_cast<double>(falling(d, r));
    return s;
}

// sum_{i<j} (d_i)_2 (d_j)_2.
double pair_sum_d2(const DegreeSequence& ds) {
    double s = 0.0, sq = 0.0;
    for (int d : ds.degrees) {
        const double v = static_cast<double>(falling(d, 2));
        s += v;
        sq += v * v;
    }
    return (s * s - sq) / 2.0;
}

double ipow(double x, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= x;
    return out;
}

} // namespace

MomentParameters moment_parameters(const DegreeSequence& ds) {
    MomentParameters mp;
    const double N = static_cast<double>(ds.N);
    const double s2 = degree_power_sum(ds, 2);
    const double pair2 = pair_sum_d2(ds);
    mp.lambda_s = s2 > 0 ? s2 / (2.0 * (N - 1.0)) : 0.0;
    mp.lambda_m = pair2 > 0 ? pair2 / (2.0 * (N - 1.0) * (N - 3.0)) : 0.0;
    if (ds.N > 7) {
        mp.nu = s2 / (N - 7.0);
        mp.mu3 = degree_power_sum(ds, 3) / (N - 7.0);
        mp.mu4 = degree_power_sum(ds, 4) / (N - 7.0);
    }
    return mp;
}

std::array<double, 4> covariance(const DegreeSequence& ds) {
    const double n = static_cast<double>(ds.n());
    const double N = static_cast<double>(ds.N);
    const i64 n1 = ds.nk(1), n2 = ds.nk(2);
    const double dfall2 = (N - 1.0) * (N - 3.0);           // ((N-1))_2
    const double dfall3 = dfall2 * (N - 5.0);              // ((N-1))_3
    const double dfall4 = dfall3 * (N - 7.0);              // ((N-1))_4

    double s11 = 0.0;
    {
        const double c1 = static_cast<double>(falling(n1, 2)) / 2.0;
        if (c1 > 0) s11 += c1 * (1.0 / (N - 1.0)) * (1.0 - 1.0 / (N - 1.0));
        const double c2 = static_cast<double>(falling(n1, 3));
        if (c2 > 0) s11 -= c2 / ((N - 1.0) * (N - 1.0));
        const double c3 = static_cast<double>(falling(n1, 4)) / 4.0;
        if (c3 > 0) s11 += c3 * (1.0 / dfall2) * (2.0 / (N - 1.0));
    }

    double s12 = 0.0;
    {
        const double c1 =
            (2.0 * static_cast<double>(falling(n1, 3)) + static_cast<double>(falling(n1, 2))) *
            static_cast<double>(n2);
        if (c1 > 0) s12 -= c1 / ((N - 1.0) * dfall2);
        const double c2 = static_cast<double>(falling(n1, 4)) * static_cast<double>(n2) / 2.0;
        if (c2 > 0) s12 += c2 * (1.0 / dfall3) * (4.0 / (N - 1.0));
    }

    double s22 = 0.0;
    {
        const double c1 = static_cast<double>(falling(n1, 2)) * static_cast<double>(n2);
        if (c1 > 0) s22 += c1 * (1.0 / dfall2) * (1.0 - 1.0 / dfall2);
        const double c2 =
            4.0 * static_cast<double>(falling(n1, 3)) * static_cast<double>(falling(n2, 2)) +
            static_cast<double>(falling(n1, 4)) * static_cast<double>(n2) +
            2.0 * static_cast<double>(falling(n1, 2)) * static_cast<double>(falling(n2, 2)) +
            4.0 * static_cast<double>(falling(n1, 3)) * static_cast<double>(n2) +
            static_cast<double>(falling(n1, 2)) * static_cast<double>(n2);
        if (c2 > 0) s22 -= c2 / (dfall2 * dfall2);
        const double c3 = static_cast<double>(falling(n1, 4)) * static_cast<double>(falling(n2, 2));
        if (c3 > 0) s22 += c3 * (1.0 / dfall4) * (8.0 * (N - 4.0) / dfall2);
    }

    return {s11 / n, s12 / n, s12 / n, s22 / n};
}

double delta_simple(const DegreeSequence& ds) {
    if (ds.N <= 7) throw NeedsLargerN("delta_simple: needs N > 7, got N = " + std::to_string(ds.N));
    const double N = static_cast<double>(ds.N);
    const MomentParameters mp = moment_parameters(ds);
    const double nu = *mp.nu;
    const double mu3 = *mp.mu3;
    const double first = 7.0 * ipow(nu, 4) + mu3 * mu3 + 4.0 * mu3 * nu * nu + 8.0 * ipow(nu, 3) +
                         4.0 * mu3 * nu + 2.0 * mu3 + 4.0 * nu * nu + 2.0 * mp.lambda_s;
    const double second = 6.0 * mu3 * mu3 + 8.0 * mu3 * nu + nu * nu + 4.0 * mp.lambda_m;
    return first / (2.0 * (N - 1.0)) + second / (4.0 * (N - 1.0) * (N - 3.0));
}

Constants constants(double c, double lambda_s, double lambda_m) {
    Constants k;
    const double c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c, c6 = c5 * c, c7 = c6 * c,
                 c8 = c7 * c, c10 = c8 * c2;
    k.c1 = std::sqrt(3.0 * (0.5 + 1.5 * c2 + 4.0 * c3 + 3.5 * c4 + 2.0 * c6)) +
           std::sqrt(2.0 * (2.0 * c3 + 5.0 * c4 + 68.0 * c5 + 72.0 * c6 + 72.0 * c8)) +
           std::sqrt(2.0 * (2.0 * c3 + 8.0 * c4 + 4.0 * c5 + 56.0 * c6 + 72.0 * c8)) +
           std::sqrt(3.0 * (c + 24.0 * c4 + 64.0 * c5 + 328.0 * c6 + 256.0 * c7 +
                            872.0 * c8 + 2048.0 * c10));
    k.big_c = (c / 2.0) * k.c1 + (4.0 / 3.0) * c2 + 6.0 * c3;
    k.c_prime = (c2 + 6.0 * c3) * lambda_s + (2.0 * c2 + 8.0 * c3) * lambda_m + c3;
    return k;
}

TheoryReport approximation_bounds(const DegreeSequence& ds) {
    TheoryReport r;
    r.n = ds.n();
    r.N = ds.N;
    r.n0 = ds.nk(0);
    r.n1 = ds.nk(1);
    r.n2 = ds.nk(2);
    r.sigma = covariance(ds);
    r.moments = moment_parameters(ds);
    const double ls = r.moments.lambda_s, lm = r.moments.lambda_m;
    r.p_simple_poisson = std::exp(-ls - lm);
    if (ds.N > 7) r.delta = delta_simple(ds);

    const i64 min_nN = std::min<i64>(r.n, r.N);
    std::string pre_a;
    if (min_nN <= 15)
        pre_a = "min(n,N) <= 15";
    else if (r.n1 < 1)
        pre_a = "n1 == 0";
    else if (r.n0 + r.n1 > r.n - 2)
        pre_a = "n0 + n1 > n - 2";

    if (pre_a.empty()) {
        const double c = static_cast<double>(std::max(r.n1, r.n2)) /
                         static_cast<double>(min_nN - 15);
        r.c_star = c;
        const Constants k = constants(c, ls, lm);
        r.big_c = k.big_c;
        r.c_prime = k.c_prime;

        const double lam_min = std::min(ls, lm);
        const double e_lam = std::exp(1.0) * lam_min;
        const double f2 =
            e_lam > 0 ? std::min(2.0, (3.0 * kPi / (2.0 * std::sqrt(2.0))) * std::sqrt(1.0 / e_lam))
                      : 2.0;
        const double f3 = e_lam > 0 ? std::min(2.0, (4.0 + 4.0 * log_plus(e_lam)) / e_lam) : 2.0;
        r.bound_a.value = k.big_c / std::sqrt(static_cast<double>(min_nN - 1)) +
                          f2 * k.c_prime / std::sqrt(static_cast<double>(r.n)) +
                          f3 * *r.delta;  // min(n,N) > 15 implies N > 7
    } else {
        r.bound_a.why = pre_a;
    }

    if (ds.N > 7) {
        const double lam = ls + lm;
        const double factor = lam > 0 ? std::min(0.5, (1.0 - std::exp(-lam)) / lam) : 0.5;
        r.bound_b.value = factor * *r.delta;
        r.l_n = r.p_simple_poisson - *r.bound_b.value;
    } else {
        r.bound_b.why = "N <= 7";
    }

    std::string pre_c = pre_a;
    if (pre_c.empty() && !r.bound_b.value) pre_c = r.bound_b.why;
    if (pre_c.empty() && *r.l_n <= 0) pre_c = "L_n <= 0";
    if (pre_c.empty()) {
        const double lam = ls + lm;
        const double emlam = std::exp(-lam);
        const double g2 = lam > 0 ? std::min(1.0, 3.0 * (1.0 - emlam) / (2.0 * lam)) : 1.0;
        const double g3 = lam > 0 ? std::min(1.0, 2.0 * (1.0 - emlam) / lam) : 1.0;
        const double core = *r.big_c / std::sqrt(static_cast<double>(min_nN - 1));
        const double mid = *r.c_prime / std::sqrt(static_cast<double>(r.n));
        r.bound_c.value = (core + g2 * mid + g3 * *r.delta) / *r.l_n;
        r.bound_c2.value = (core + mid) / *r.l_n;
    } else {
        r.bound_c.why = pre_c;
        r.bound_c2.why = pre_c;
    }
    return r;
}

std::string theory_report_json(const TheoryReport& r) {
    json j;
    j["n"] = r.n;
    j["N"] = r.N;
    j["n0"] = r.n0;
    j["n1"] = r.n1;
    j["n2"] = r.n2;
    j["sigma11"] = r.sigma[0];
    j["sigma12"] = r.sigma[1];
    j["sigma21"] = r.sigma[2];
    j["sigma22"] = r.sigma[3];
    j["lambda_s"] = r.moments.lambda_s;
    j["lambda_m"] = r.moments.lambda_m;
    auto opt = [](const std::optional<double>& v) {
        return v ? json(*v) : json(nullptr);
    };
    j["nu"] = opt(r.moments.nu);
    j["mu3"] = opt(r.moments.mu3);
    j["mu4"] = opt(r.moments.mu4);
    j["delta_simple"] = opt(r.delta);
    j["c_star"] = opt(r.c_star);
    j["big_c"] = opt(r.big_c);
    j["c_prime"] = opt(r.c_prime);
    j["p_simple_poisson"] = r.p_simple_poisson;
    j["l_n"] = opt(r.l_n);
    j["bound_a"] = opt(r.bound_a.value);
    j["bound_b"] = opt(r.bound_b.value);
    j["bound_c"] = opt(r.bound_c.value);
    j["bound_c2"] = opt(r.bound_c2.value);
    j["diagnostics"] = {{"bound_a", r.bound_a.why.empty() ? "ok" : r.bound_a.why},
                        {"bound_b", r.bound_b.why.empty() ? "ok" : r.bound_b.why},
                        {"bound_c", r.bound_c.why.empty() ? "ok" : r.bound_c.why},
                        {"bound_c2", r.bound_c2.why.empty() ? "ok" : r.bound_c2.why}};
    return j.dump(2) + "\n";
}

MomentBounds moment_bound_rhs(const DegreeSequence& ds) {
    MomentBounds pb;
    const double m = static_cast<double>(std::max(ds.nk(1), ds.nk(2)));
    const double N = static_cast<double>(ds.N);
    const MomentParameters mp = moment_parameters(ds);

    if (ds.N > 15 && ds.nk(1) >= 1) {
        const double c = m / (N - 15.0);
        pb.variance_sum.value = constants(c, mp.lambda_s, mp.lambda_m).c1 * m / std::sqrt(N - 1.0);
    } else {
        pb.variance_sum.why = ds.N > 15 ? "n1 == 0" : "N <= 15";
    }
    if (ds.N > 3) {
        const double c = m / (N - 3.0);
        pb.second_moment.value = (8.0 * c + 36.0 * c * c) * m;
    } else {
        pb.second_moment.why = "N <= 3";
    }
    if (ds.N > 7) {
        const double c = m / (N - 7.0);
        pb.tree_vs_defect.value = constants(c, mp.lambda_s, mp.lambda_m).c_prime;
        pb.defect_vs_tree.value = pb.tree_vs_defect.value;
        pb.defect_pair.value = delta_simple(ds);
    } else {
        pb.tree_vs_defect.why = "N <= 7";
        pb.defect_vs_tree.why = "N <= 7";
        pb.defect_pair.why = "N <= 7";
    }
    return pb;
}

double comparison_bound(const std::array<double, 4>& sigma1, const std::vector<double>& lambda1,
                        const std::array<double, 4>& sigma2, const std::vector<double>& lambda2) {
    if (lambda1.size() != lambda2.size())
        throw Error("comparison_bound: rate vectors differ in length");
    for (double l : lambda1)
        if (!(l > 0)) throw NonpositiveLambda("comparison_bound: lambda must be > 0");
    for (double l : lambda2)
        if (!(l > 0)) throw NonpositiveLambda("comparison_bound: lambda must be > 0");
    double out = 0.0;
    for (int i = 0; i < 4; ++i) out += 0.5 * std::abs(sigma1[i] - sigma2[i]);
    for (std::size_t j = 0; j < lambda1.size(); ++j)
        out += 2.0 * std::abs(lambda1[j] - lambda2[j]);
    return out;
}

std::array<double, 4> asymptotic_sigma(const std::vector<double>& pmf, double mu) {
    if (!(mu > 0)) throw Error("asymptotic_sigma: mu must be positive");
    double total = 0.0;
    for (double p : pmf) {
        if (p < 0) throw Error("asymptotic_sigma: negative pmf entry");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("asymptotic_sigma: pmf does not sum to 1");
    const double p1 = pmf.size() > 1 ? pmf[1] : 0.0;
    const double p2 = pmf.size() > 2 ? pmf[2] : 0.0;
    const double s11 = ipow(p1, 2) / (2.0 * mu) - ipow(p1, 3) / ipow(mu, 2) +
                       ipow(p1, 4) / (2.0 * ipow(mu, 3));
    const double s12 = -2.0 * ipow(p1, 3) * p2 / ipow(mu, 3) + 2.0 * ipow(p1, 4) * p2 / ipow(mu, 4);
    const double s22 = ipow(p1, 2) * p2 / ipow(mu, 2) - 4.0 * ipow(p1, 3) * p2 * p2 / ipow(mu, 4) -
                       ipow(p1, 4) * p2 / ipow(mu, 4) + 8.0 * ipow(p1, 4) * p2 * p2 / ipow(mu, 5);
    return {s11, s12, s12, s22};
}

double min_eigenvalue_2x2(double a, double b, double c) {
    return 0.5 * ((a + c) - std::hypot(a - c, 2.0 * b));
}

} // namespace cm::theory
