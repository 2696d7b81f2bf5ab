// Rigorously bracketed evaluation of the random Dirichlet series
// F(sigma) = sum_n X_n n^(-sigma), its variance sum n^(-2 sigma), the
// derivative-variance sum n^(-2 sigma) log^2 n, truncation planning,
// and the iterated-logarithm normalizers.
#pragma once

#include <cstdint>
#include <vector>

#include "dirichlet/bracket.hpp"
#include "dirichlet/sigma_point.hpp"
#include "dirichlet/sign_path.hpp"

namespace dirichlet {

// Global knobs for bracketed series evaluation.
struct SeriesLimits {
    std::uint64_t term_budget = std::uint64_t(1) << 24; // max terms per bracket sum
    double rel_width_tol = 1e-8;                        // auto-M bracket width target
};

inline const SeriesLimits& default_limits() {
    static const SeriesLimits limits{};
    return limits;
}

struct ZetaBrackets {
    Bracket partial; // encloses sum_{n<=M} n^(-s)
    Bracket tail;    // encloses sum_{n>M}  n^(-s)
    Bracket total;   // partial + tail
    std::uint64_t M = 0;
};

// Enclosure of sum n^(-s) split at M, with the integral-comparison tail
// sandwich (M+1)^(1-s)/(s-1) <= tail <= M^(1-s)/(s-1).
ZetaBrackets zeta_bracket(double s, std::uint64_t M,
                          const SeriesLimits& limits = default_limits());

struct VarianceBracket {
    Bracket value;
    std::uint64_t M = 0; // terms summed directly
    bool loose = false;  // width target not reachable within the budget
};

// Enclosure of E F(sigma)^2 = sum n^(-2 sigma), M auto-chosen so the
// relative width is <= rel_tol (or `loose` when the budget caps M).
VarianceBracket variance(const SigmaPoint& sigma,
                         const SeriesLimits& limits = default_limits());
VarianceBracket variance(const SigmaPoint& sigma, double rel_tol,
                         const SeriesLimits& limits = default_limits());

// Enclosure of E F'(sigma)^2 = sum n^(-2 sigma) log^2 n, plus the
// certified comparison constant against the closed form 2/u^3.
struct DerivVarianceBracket {
    Bracket value;
    double closed_form_2_over_u3 = 0.0; // 2/u^3
    double certified_ratio_hi = 0.0;    // value.hi / (2/u^3), recorded
    std::uint64_t M = 0;
};
DerivVarianceBracket deriv_variance_bracket(const SigmaPoint& sigma,
                                            const SeriesLimits& limits = default_limits());

struct TruncationPlan {
    std::uint64_t M = 0;         // term count (capped at the budget when infeasible)
    double tail_std_bound = 0.0; // certified upper bound on sd of the dropped tail
    double target_fraction = 0.0;
    bool feasible = false;
    double achieved_fraction = 0.0; // certified tail variance / variance.lo
    double required_log_M = 0.0;    // log-space requirement (finite even when M overflows)
    double sigma_u = 0.0;           // gap of the sigma the plan was built for
};

// Smallest M whose certified tail variance M^(-u)/u is at most
// target_fraction * variance(sigma).lo; marked infeasible (and capped at
// term_budget) when that M exceeds the budget.
TruncationPlan plan_truncation(const SigmaPoint& sigma, double target_fraction,
                               std::uint64_t term_budget,
                               const SeriesLimits& limits = default_limits());

struct EvalResult {
    double value = 0.0; // sum_{n<=M} sign(n) n^(-sigma)
    TruncationPlan plan;
    double sigma_u = 0.0;
};

// Truncated series value for one path; deterministic given
// (path, sigma, plan) — bit-identical across runs and worker counts.
EvalResult eval_truncated(const SignPath& path, const SigmaPoint& sigma,
                          const TruncationPlan& plan);

// Same evaluation for many paths sharing the term stream (the fast
// kernel).  Element i is bit-identical to eval_truncated(paths[i], ...).
std::vector<double> eval_many(const std::vector<SignPath>& paths,
                              const SigmaPoint& sigma, std::uint64_t M,
                              int workers = 1);

// Block sum over the index range [n_first, n_last] only (both inclusive),
// sharing the sign stream with the full evaluation; used for split-range
// studies.  Deterministic with the same contract as eval_many.
std::vector<double> eval_range_many(const std::vector<SignPath>& paths,
                                    const SigmaPoint& sigma,
                                    std::uint64_t n_first, std::uint64_t n_last,
                                    int workers = 1);

// The n^(-sigma) term table for one chunk, shared by all evaluation
// kernels: terms[j] = (first_n + j)^(-sigma_value), j < count.
void fill_power_terms(double* terms, std::uint64_t first_n, std::uint64_t count,
                      double sigma_value);

struct LilScale {
    Bracket ef2;   // E F(sigma)^2
    Bracket f;     // sqrt(2 log log E F^2)
    Bracket denom; // sqrt(2 E F^2 log log E F^2)
};

// Iterated-logarithm normalizers; requires variance.lo > e so the double
// logarithm is defined and positive.
LilScale lil_scale(const SigmaPoint& sigma,
                   const SeriesLimits& limits = default_limits());

// F-bar: value / sqrt(midpoint of the variance bracket).  The two-argument
// form lets callers reuse one bracket across many paths.
double normalize(const EvalResult& r, const Bracket& variance_bracket);
double normalize(const EvalResult& r,
                 const SeriesLimits& limits = default_limits());

} // namespace dirichlet
