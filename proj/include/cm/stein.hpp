// Numerical laboratory for the joint normal-Poisson characterization operator:
// the mixed Gaussian/immigration-death semigroup, its interpolation kernel,
// the equation solver along the semigroup path, finite-difference residual
// checks, and measured-versus-proved smoothness probes for the solution.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cm/common.hpp"

namespace cm::stein {

using XVec = std::vector<double>;       // continuous coordinates
using YVec = std::vector<long long>;    // counting coordinates

// Target parameters: Sigma (d x d, symmetric PSD) and strictly positive rates.
struct Params {
    int d = 0;
    std::vector<double> sigma;   // row-major d*d
    std::vector<double> lambda;  // size r, all > 0

    int r() const { return static_cast<int>(lambda.size()); }
    double sig(int i, int j) const { return sigma[static_cast<std::size_t>(i * d + j)]; }

    // Validates shape, symmetry, positive rates (NonpositiveLambda), and for
    // d <= 2 that the smallest eigenvalue is >= -1e-10.
    static Params make(int d, std::vector<double> sigma, std::vector<double> lambda);
};

// h(x, y) = trig(a.x + b) * chi(y): products of a bounded smooth x-factor with
// |a|_2 <= 1 (so every partial derivative of every order is bounded by 1) and
// a bounded y-factor.  ||h|| <= 1 always; membership in the third-order test
// class is certified by |a|_2 <= 1.
struct TestFunction {
    std::string id;
    std::vector<double> a;
    double b = 0.0;
    bool use_sin = true;
    enum class Chi { One, IndicatorZero, ExpDecay, CosSum } chi = Chi::One;
    double c = 1.0;  // decay rate (ExpDecay) or frequency (CosSum)

    double operator()(const XVec& x, const YVec& y) const;
    double chi_value(const YVec& y) const;
    bool constant_in_x() const;
    bool constant_in_y() const { return chi == Chi::One; }
    bool zero_off_zero() const { return chi == Chi::IndicatorZero; }
    // |a|_2; class membership requires <= 1.
    double a_norm() const;
};

// Mixed binomial-thinning/Poisson-immigration transition probability
// P(path at time s is z | started at y), a product over coordinates.
// s = 0 is the point mass at y; s = 1 is the stationary Poisson law.
double transition(const YVec& y, const YVec& z, double s, const std::vector<double>& lambda);

// Upper bound used for truncation: 1 when z <= y, else (1 v lambda^z)/(z-y)!.
double transition_envelope(long long y, long long z, double lambda);

// E h(Z, P) under the target law (closed form for the supported factors).
double reference_expectation(const TestFunction& h, const Params& P);

// T_s h(x, y): Gaussian interpolation in x tensored with the counting kernel
// in y.  Truncation error is kept below 1e-9 (BudgetExceeded if impossible).
double interpolate(const TestFunction& h, const XVec& x, const YVec& y, double s,
                   const Params& P);

// Same quantity for an arbitrary bounded h, by 64-node Hermite quadrature per
// continuous dimension (d <= 2) over a Cholesky factor of Sigma.
double interpolate_generic(const std::function<double(const XVec&, const YVec&)>& h,
                           const XVec& x, const YVec& y, double s, const Params& P,
                           const YVec& z_caps);

// Solution of the characterization equation at one point:
//   f(x,y) = -Integral_0^1 (T_{1-u^2} h(x,y) - E h(Z,P)) / u du
// via adaptive Simpson with per-panel Richardson control.
double solve(const TestFunction& h, const XVec& x, const YVec& y, const Params& P,
             double quad_tol = 1e-8);

// Apply the characterization operator to any f by central differences in x
// (steps 1e-4 first order, 1e-3 second order) and exact differences in y.
double generator_apply(const std::function<double(const XVec&, const YVec&)>& f,
                       const XVec& x, const YVec& y, const Params& P);

// | (A f_h)(x,y) - (h(x,y) - E h) |, the defect of the numerical solution.
double generator_residual(const TestFunction& h, const XVec& x, const YVec& y, const Params& P);

// Total variation distance between Po(lambda) and its unit shift:
// sum_k |Po{k} - Po{k-1}|, which must equal 2 Po{floor(lambda)} (checked to
// 1e-12 internally).
double poisson_unimodal_tv(double lambda);

// Deterministic dictionary of certified test functions.
std::vector<TestFunction> make_dictionary(int d, int r, int size);
// x-only members (chi == One), for conditional-law experiments.
std::vector<TestFunction> make_x_dictionary(int d, int size);

struct ProbeRow {
    std::string h_id;
    std::string point;     // "x1 x2|y1 y2"
    std::string quantity;  // which smoothness functional was measured
    double measured = 0.0;
    double bound = 0.0;
    double margin = 0.0;   // bound - measured
};

// Measure every smoothness functional of f_h on a grid and pair it with its
// proved bound (the improved variants when h vanishes off y = 0, zero when h
// is constant in the relevant block).
std::vector<ProbeRow> smoothness_probe(const Params& P, const std::vector<TestFunction>& dict,
                                       const std::vector<std::pair<XVec, YVec>>& grid);
std::string probe_csv(const std::vector<ProbeRow>& rows);

// Adaptive Simpson quadrature on [a, b] (exposed for tests).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// Nodes/weights for integrating g against the standard normal density with 64
// Hermite nodes: integral approx sum w_i g(t_i).
void gauss_hermite_64(std::vector<double>& nodes, std::vector<double>& weights);

} // namespace cm::stein
