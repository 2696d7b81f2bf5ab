// Closed-form concentration bounds, the MGF sandwich, and the exponential
// tilt: certified evaluation of h(t) = sum_n tanh(t*v_n)*v_n and the
// bisection solve for the tilt parameter t0 with h(t0) = target.
#pragma once

#include <cstdint>

#include "dirichlet/bracket.hpp"
#include "dirichlet/series.hpp"
#include "dirichlet/sigma_point.hpp"

namespace dirichlet {

// exp(-lambda^2 / (2 * sum_sq)) for a weighted sign sum with
// sum_sq = sum of squared weights; optionally doubled and capped at 1
// for the two-sided event.
double hoeffding_bound(double sum_sq, double lambda, bool two_sided = false);

// Certified two-sided bounds on E exp(t * F / sqrt(E F^2)):
//   exp(t^2/2 - t^4 * pi^2 / (48 * ef2.lo^2)) <= E exp(t Fbar) <= exp(t^2/2).
Bracket mgf_sandwich(const SigmaPoint& sigma, double t,
                     const SeriesLimits& limits = default_limits());

// h(t) = sum_{n>=1} tanh(t * v_n) * v_n with v_n = n^-sigma / sqrt(E F^2).
// Returns a bracket of width <= 2*tol.  The head is summed directly; the
// tail uses the odd-series envelope x - x^3/3 <= tanh x <= x - x^3/3 +
// (2/15) x^5 together with integral sandwiches for the power sums, which
// keeps the cutoff modest even close to the critical line.
Bracket h_of_t(const SigmaPoint& sigma, double t, double tol,
               const SeriesLimits& limits = default_limits());

// Tilted product measure: P(X_n = +1) proportional to exp(theta_n) with
// theta_n = t0 * n^-sigma / norm.
struct TiltedModel {
    SigmaPoint sigma = SigmaPoint::from_u(1.0);
    double t0 = 0.0;
    double norm = 1.0;   // sqrt of the variance bracket midpoint
    double target = 0.0; // requested mean shift of Fbar
    double residual = 0.0; // |h(t0) - target| certified bound

    double theta(std::uint64_t n) const;
};

// Solve h(t0) = target by bisection on [target, 1.5*target]; the solution
// exists there whenever target < (4 / (3*pi)) * ef2.lo, otherwise a domain
// error ("tilt target too large") is reported.  tol < 0 selects the
// default 1e-10 * max(1, target).
TiltedModel solve_t0(const SigmaPoint& sigma, double target, double tol = -1.0,
                     const SeriesLimits& limits = default_limits());

// (1/2 - eps) * exp(-delta^2 * (1+lambda)^2 * f^2 / 2): the lower-deviation
// floor used opposite the Hoeffding ceiling.
double ld_lower_bound(double delta, double f, double lambda, double eps);

// Borel-Cantelli exponent (1-gamma)^2 (1+lambda)^2 (1+delta) for the
// exceedance series sum_k k^-e; the series diverges iff e <= 1.
struct ExponentReport {
    double value = 0.0;
    bool diverges = false;
};

ExponentReport ld_exponent(double gamma, double lambda, double delta);

} // namespace dirichlet
