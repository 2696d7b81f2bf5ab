// Deterministic sigma_k schedules, split-point construction (log-space),
// dyadic refinement grids, and the per-level chaining thresholds.
#pragma once

#include <cstdint>

#include "dirichlet/bracket.hpp"
#include "dirichlet/series.hpp"
#include "dirichlet/sigma_point.hpp"

namespace dirichlet {

enum class ScheduleKind {
    lower_bound_seq, // u_k = exp(-k^(1+delta))
    upper_bound_seq, // u_k = exp(-k^(1-delta))
};

struct Schedule {
    ScheduleKind kind = ScheduleKind::lower_bound_seq;
    double delta = 0.1;
    int k_min = 1; // sequence domain start
    int k_max = 1; // largest k with u_k a normal double
};

Schedule make_schedule(ScheduleKind kind, double delta);

// u_k = exp(-k^(1 +/- delta)), exponent formed exactly in log-space and
// exponentiated once.  Reports a representability error instead of
// silently returning a subnormal/zero gap.
SigmaPoint sigma_seq(const Schedule& sched, int k);

// Step-1 split points, kept in natural-log space (the literal counts are
// astronomically large).  beta_k is the smallest value on the dyadic
// grid {log k * 2^-j, 0 <= j <= 64} satisfying the sufficient condition
// that makes consecutive splits nested (log_N1(k+1) >= log_N2(k)).
struct SplitPlan {
    int k = 0;
    double log_N1 = 0.0;
    double log_N2 = 0.0;
    double alpha_k = 0.0; // sqrt(log k)
    double beta_k = 0.0;
    int beta_grid_j = 0;  // beta_k = log k * 2^-j
    double base = 0.0;    // 1 + exp(-k^(1+delta)) - (log k)^(-1/2), in (0,1)
    double gap_margin = 0.0; // log_N1(k+1) - log_N2(k), >= 0 by construction
};

SplitPlan split_points(const Schedule& sched, int k);

// Smallest k at which split_points is defined for this delta (the base
// factor becomes positive); computed numerically.
int split_k_min(double delta);

// Desk-scale split surrogate: head block [1,N1] holding at most eps1 of
// the variance, tail beyond N2 certified at most eps2 of it.
struct SurrogateSplit {
    std::uint64_t N1 = 0; // largest head end with partial variance <= eps1 * var.lo
    std::uint64_t N2 = 0; // smallest tail start with certified tail <= eps2 * var.lo
};

SurrogateSplit surrogate_split(const SigmaPoint& sigma, double eps1, double eps2,
                               std::uint64_t term_budget,
                               const SeriesLimits& limits = default_limits());

// Dyadic grid between consecutive schedule points sigma_k < sigma_{k-1},
// exact affine interpolation in u-space.
struct DyadicGrid {
    int k = 0;
    int level_cap = 0; // L
    double c0 = 1.0;
    double delta = 0.0;
    double u_left = 0.0;  // u at sigma_k
    double u_right = 0.0; // u at sigma_{k-1}
};

DyadicGrid make_dyadic_grid(const Schedule& sched, int k, int level_cap,
                            double c0 = 1.0);

// tau_{l,n}: n-th point of level l.  Refinement consistency
// tau_{l,2n} == tau_{l-1,n} holds bit-exactly.
SigmaPoint dyadic_points(const DyadicGrid& grid, int l, std::uint64_t n);

// lambda_{k,l} with lambda^2 = (2/c0) * exp(k^(1-delta)) * l / 4^l.
double chain_threshold(const DyadicGrid& grid, int l);

} // namespace dirichlet
