// Schedules, split points, dyadic grids.  Everything here is pure integer /
// double arithmetic on closed-form expressions; the only subtleties are
// (a) staying in log-space so that astronomically large counts never
// overflow, and (b) picking beta_k on a dyadic grid so that the nesting
// guarantee for consecutive split plans holds exactly in floating point.

#include "dirichlet/schedules.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dirichlet/errors.hpp"
#include "dirichlet/summation.hpp"

namespace dirichlet {

namespace {

constexpr double kLog2 = 0.6931471805599453094; // log(2)

// Largest exponent x with exp(-x) still a normal double.
const double kMaxNegExp = -std::log(std::numeric_limits<double>::min());

double schedule_exponent(const Schedule& sched, int k) {
    const double p = sched.kind == ScheduleKind::lower_bound_seq
                         ? 1.0 + sched.delta
                         : 1.0 - sched.delta;
    return std::pow(static_cast<double>(k), p);
}

// base factor 1 + exp(-k^(1+delta)) - (log k)^(-1/2); the split is defined
// once this lands in (0,1).
double split_base(double delta, int k) {
    const double expo = std::pow(static_cast<double>(k), 1.0 + delta);
    const double small = expo > kMaxNegExp ? 0.0 : std::exp(-expo);
    return 1.0 + small - 1.0 / std::sqrt(std::log(static_cast<double>(k)));
}

} // namespace

Schedule make_schedule(ScheduleKind kind, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw Error(ErrorKind::argument,
                    "schedule delta must lie in (0,1), got " + std::to_string(delta));
    }
    Schedule s;
    s.kind = kind;
    s.delta = delta;
    s.k_min = 1;
    const double p = kind == ScheduleKind::lower_bound_seq ? 1.0 + delta : 1.0 - delta;
    // k_max: largest k with k^p <= log(1/DBL_MIN); clamp against int range
    // for very small p.
    const double raw = std::pow(kMaxNegExp, 1.0 / p);
    s.k_max = raw > 2.0e9 ? std::numeric_limits<int>::max()
                          : static_cast<int>(raw);
    while (s.k_max > 1 && schedule_exponent(s, s.k_max) > kMaxNegExp) --s.k_max;
    return s;
}

SigmaPoint sigma_seq(const Schedule& sched, int k) {
    if (k < sched.k_min) {
        throw Error(ErrorKind::argument,
                    "schedule index k=" + std::to_string(k) + " below k_min=" +
                        std::to_string(sched.k_min));
    }
    const double expo = schedule_exponent(sched, k);
    if (expo > kMaxNegExp) {
        throw Error(ErrorKind::representability,
                    "u_k = exp(-k^p) underflows below the smallest normal double "
                    "at k=" + std::to_string(k) + " (exponent " +
                        std::to_string(expo) + ")");
    }
    return SigmaPoint::from_u(std::exp(-expo));
}

int split_k_min(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw Error(ErrorKind::argument, "delta must lie in (0,1)");
    }
    for (int k = 2; k < 1 << 20; ++k) {
        const double b = split_base(delta, k);
        if (b > 0.0 && b < 1.0) return k;
    }
    throw Error(ErrorKind::schedule, "no admissible split index found");
}

SplitPlan split_points(const Schedule& sched, int k) {
    if (sched.kind != ScheduleKind::lower_bound_seq) {
        throw Error(ErrorKind::argument,
                    "split points are defined for the lower-bound schedule only");
    }
    if (k < 2) {
        throw Error(ErrorKind::argument,
                    "split index must satisfy k >= 2, got " + std::to_string(k));
    }
    const double base = split_base(sched.delta, k);
    if (!(base > 0.0) || !(base < 1.0)) {
        throw Error(ErrorKind::schedule,
                    "split undefined at k=" + std::to_string(k) +
                        " (base factor " + std::to_string(base) +
                        " outside (0,1)); smallest admissible k is " +
                        std::to_string(split_k_min(sched.delta)));
    }

    const double expo_k = std::pow(static_cast<double>(k), 1.0 + sched.delta);
    const double E_k = std::exp(expo_k);
    if (!std::isfinite(E_k)) {
        throw Error(ErrorKind::representability,
                    "exp(k^(1+delta)) overflows at k=" + std::to_string(k));
    }

    SplitPlan plan;
    plan.k = k;
    plan.base = base;
    plan.alpha_k = std::sqrt(std::log(static_cast<double>(k)));
    plan.log_N1 = -E_k * std::log(base);

    // beta_k = log k * 2^-j, with j the largest grid index that keeps the
    // nesting condition.  Writing the condition through
    //   q = exp(k+1 exponent - k exponent) * (-log base(k+1))
    // makes the guarantee log_N2(k) <= log_N1(k+1) exact by construction:
    // both sides become E_k * (j*log2) vs E_k * q with j*log2 <= q.
    const double expo_k1 = std::pow(static_cast<double>(k + 1), 1.0 + sched.delta);
    const double base_k1 = split_base(sched.delta, k + 1);
    if (!(base_k1 > 0.0) || !(base_k1 < 1.0)) {
        throw Error(ErrorKind::schedule,
                    "split undefined at k+1=" + std::to_string(k + 1));
    }
    const double q = std::exp(expo_k1 - expo_k) * (-std::log(base_k1));
    int j = static_cast<int>(std::floor(q / kLog2));
    if (j > 64) j = 64;
    if (j < 1) {
        throw Error(ErrorKind::schedule,
                    "beta grid degenerate at k=" + std::to_string(k));
    }
    plan.beta_grid_j = j;
    plan.beta_k = std::ldexp(std::log(static_cast<double>(k)), -j);
    // log(log k / beta_k) == j*log2 exactly in the dyadic parametrisation.
    plan.log_N2 = E_k * (static_cast<double>(j) * kLog2);
    plan.gap_margin = E_k * (q - static_cast<double>(j) * kLog2);
    if (!std::isfinite(plan.log_N1) || !std::isfinite(plan.log_N2)) {
        throw Error(ErrorKind::representability,
                    "split counts overflow at k=" + std::to_string(k));
    }
    return plan;
}

SurrogateSplit surrogate_split(const SigmaPoint& sigma, double eps1, double eps2,
                               std::uint64_t term_budget,
                               const SeriesLimits& limits) {
    if (!(eps1 >= 0.0) || !(eps1 < 1.0) || !(eps2 > 0.0) || !(eps2 < 1.0)) {
        throw Error(ErrorKind::argument,
                    "surrogate split needs eps1 in [0,1) and eps2 in (0,1)");
    }
    const Bracket var = variance(sigma, limits.rel_width_tol, limits).value;
    const double s = sigma.two_sigma();
    const double u = sigma.u();

    // Head: largest N1 with certified partial sum <= eps1 * var.lo.
    const double head_target = eps1 * var.lo;
    SurrogateSplit out;
    KahanAccumulator partial;
    std::uint64_t n = 0;
    while (true) {
        if (n >= term_budget) {
            throw Error(ErrorKind::infeasible,
                        "surrogate head block exceeds the term budget");
        }
        KahanAccumulator trial = partial;
        trial.add(std::pow(static_cast<double>(n + 1), -s));
        const double hi = trial.value() * (1.0 + 4e-15);
        if (hi > head_target) break;
        partial = trial;
        ++n;
    }
    out.N1 = n;

    // Tail: smallest N2 with certified tail bound N2^-u / u <= eps2 * var.lo.
    const double tail_target = eps2 * var.lo;
    auto tail_hi = [&](double M) {
        return next_up(std::pow(M, -u) / u);
    };
    double M = 1.0;
    if (tail_hi(M) > tail_target) {
        // log-space seed, then settle on the exact integer.
        double logM = std::log(1.0 / (tail_target * u)) / u;
        if (logM > std::log(static_cast<double>(term_budget))) {
            throw Error(ErrorKind::infeasible,
                        "surrogate tail start exceeds the term budget "
                        "(needs log N2 ~ " + std::to_string(logM) + ")");
        }
        M = std::floor(std::exp(logM));
        if (M < 1.0) M = 1.0;
        while (tail_hi(M) > tail_target) M += 1.0;
        while (M > 1.0 && tail_hi(M - 1.0) <= tail_target) M -= 1.0;
    }
    out.N2 = static_cast<std::uint64_t>(M);
    if (out.N2 > term_budget) {
        throw Error(ErrorKind::infeasible,
                    "surrogate tail start exceeds the term budget");
    }
    if (!(out.N1 < out.N2)) {
        throw Error(ErrorKind::infeasible,
                    "surrogate blocks overlap: N1=" + std::to_string(out.N1) +
                        " >= N2=" + std::to_string(out.N2) +
                        "; loosen eps1 or tighten eps2");
    }
    return out;
}

DyadicGrid make_dyadic_grid(const Schedule& sched, int k, int level_cap,
                            double c0) {
    if (sched.kind != ScheduleKind::upper_bound_seq) {
        throw Error(ErrorKind::argument,
                    "dyadic refinement runs on the upper-bound schedule");
    }
    if (k < 2) {
        throw Error(ErrorKind::argument,
                    "dyadic grid needs k >= 2 (interval [sigma_k, sigma_{k-1}])");
    }
    if (level_cap < 0 || level_cap > 40) {
        throw Error(ErrorKind::argument, "level cap must lie in [0, 40]");
    }
    if (!(c0 > 0.0)) {
        throw Error(ErrorKind::argument, "c0 must be positive");
    }
    DyadicGrid g;
    g.k = k;
    g.level_cap = level_cap;
    g.c0 = c0;
    g.delta = sched.delta;
    g.u_left = sigma_seq(sched, k).u();
    g.u_right = sigma_seq(sched, k - 1).u();
    return g;
}

SigmaPoint dyadic_points(const DyadicGrid& grid, int l, std::uint64_t n) {
    if (l < 0 || l > grid.level_cap) {
        throw Error(ErrorKind::argument, "level out of range");
    }
    const std::uint64_t count = std::uint64_t{1} << l;
    if (n > count) {
        throw Error(ErrorKind::argument, "grid index out of range");
    }
    if (n == 0) return SigmaPoint::from_u(grid.u_left);
    if (n == count) return SigmaPoint::from_u(grid.u_right);
    // Exact dyadic fraction; identical bits for (l, 2n) and (l-1, n).
    const double frac = std::ldexp(static_cast<double>(n), -l);
    return SigmaPoint::from_u(grid.u_left + frac * (grid.u_right - grid.u_left));
}

double chain_threshold(const DyadicGrid& grid, int l) {
    if (l < 1 || l > grid.level_cap) {
        throw Error(ErrorKind::argument,
                    "chain threshold defined for levels 1..L");
    }
    const double expo = std::pow(static_cast<double>(grid.k), 1.0 - grid.delta);
    const double scale = std::exp(expo);
    if (!std::isfinite(scale)) {
        throw Error(ErrorKind::representability,
                    "exp(k^(1-delta)) overflows at k=" + std::to_string(grid.k));
    }
    const double lam_sq =
        (2.0 / grid.c0) * scale * static_cast<double>(l) * std::ldexp(1.0, -2 * l);
    return std::sqrt(lam_sq);
}

} // namespace dirichlet
